//! Acceptance suite: one pass/fail line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use hypergroup::amenability::{approximate_diagonal, indicator_diagonal, weak_amenability_witness};
use hypergroup::builders::{builtin_groups, group_characters, irr_exact, irr_hypergroup};
use hypergroup::group;
use hypergroup::norms::{
    mcb_contexts, mcb_with_contexts, norm_a, norm_blambda, norm_ma, product_characters,
    random_functions,
};
use hypergroup::quantum::{character_function, hat_map, CentralFunction};
use hypergroup::spectral::{check_p2, chi0, voit_deform, P2Options, P2Status};
use hypergroup::{
    characters, conjugacy_hypergroup, family, haar_weights, product, verify_axioms, FamilySpec,
    FusionRing, HFunction, HypergroupTable, Rational, Scalar,
};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn r(n: i64) -> Rational {
    Rational::ratio(n, 1)
}

/// Irreducible dimensions in increasing order.
fn known_dims(name: &str) -> Vec<i64> {
    match name {
        "Z2" => vec![1, 1],
        "Z4" => vec![1, 1, 1, 1],
        "S3" => vec![1, 1, 2],
        "D4" | "Q8" => vec![1, 1, 1, 1, 2],
        "A4" => vec![1, 1, 1, 3],
        other => panic!("no reference dimensions for {other}"),
    }
}

fn finite_tables() -> Vec<HypergroupTable<f64>> {
    builtin_groups()
        .iter()
        .flat_map(|g| {
            [
                conjugacy_hypergroup::<f64>(g),
                irr_hypergroup::<f64>(g).unwrap(),
            ]
        })
        .collect()
}

fn axioms_and_haar() -> Outcome {
    for g in builtin_groups() {
        let conj: HypergroupTable<Rational> = conjugacy_hypergroup(&g);
        let irr = irr_exact(&g).map_err(|e| e.to_string())?;
        for h in [&conj, &irr] {
            let rep = verify_axioms(h, 0.0);
            ensure(rep.all_passed(), || format!("{rep}"))?;
        }
        let sizes: Vec<Rational> = g
            .conjugacy_classes()
            .iter()
            .map(|c| r(c.len() as i64))
            .collect();
        let w = haar_weights(&conj, 0.0).map_err(|e| e.to_string())?;
        ensure(w == sizes, || format!("{}: conj haar {w:?}", g.name()))?;
        let squares: Vec<Rational> = known_dims(g.name()).iter().map(|d| r(d * d)).collect();
        let w = haar_weights(&irr, 0.0).map_err(|e| e.to_string())?;
        ensure(w == squares, || format!("{}: irr haar {w:?}", g.name()))?;
    }
    Ok("exact on Conj(G) and Irr(G) for Z2 Z4 S3 D4 Q8 A4".into())
}

fn norm_equality() -> Outcome {
    let (mut worst_mb, mut worst_ba) = (0.0f64, 0.0f64);
    for (i, h) in finite_tables().iter().enumerate() {
        let t = characters(h).map_err(|e| e.to_string())?;
        for u in random_functions(h.size(), 100, 1000 + i as u64) {
            let a = norm_a(h, &t, &u).map_err(|e| e.to_string())?.0;
            let b = norm_blambda(h, &t, &u).map_err(|e| e.to_string())?.0;
            let m = norm_ma(h, &t, &u).map_err(|e| e.to_string())?;
            worst_mb = worst_mb.max((m - b).abs());
            worst_ba = worst_ba.max((b - a).abs());
        }
    }
    ensure(worst_mb < 1e-8 && worst_ba < 1e-8, || {
        format!("gaps {worst_mb:e} {worst_ba:e}")
    })?;
    Ok(format!(
        "12 tables x 100 functions, max gaps {worst_mb:.1e} / {worst_ba:.1e}"
    ))
}

fn mcb_supremum() -> Outcome {
    let groups = [
        group::cyclic(2).unwrap(),
        group::symmetric3(),
        group::dihedral4(),
    ];
    let s3 = group::symmetric3();
    let mut worst = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for (k, h) in [
        conjugacy_hypergroup::<f64>(&s3),
        irr_hypergroup::<f64>(&s3).unwrap(),
    ]
    .iter()
    .enumerate()
    {
        let t = characters(h).map_err(|e| e.to_string())?;
        let contexts = mcb_contexts(h, &groups).map_err(|e| e.to_string())?;
        // H x Z2 is commutative, so its multiplier norm is available directly.
        let z2: HypergroupTable<f64> = groups[0].as_hypergroup();
        let tz2 = characters(&z2).map_err(|e| e.to_string())?;
        let hz2 = product(h, &z2).map_err(|e| e.to_string())?;
        let tprod = product_characters(&t, &tz2);
        for u in random_functions(h.size(), 20, 77 + k as u64) {
            let ma = norm_ma(h, &t, &u).map_err(|e| e.to_string())?;
            let mcb = mcb_with_contexts(h, &t, &u, &contexts, 5).map_err(|e| e.to_string())?;
            worst = worst.max((mcb.value - ma).abs());
            let lifted =
                HFunction::from_dense(&(0..hz2.size()).map(|i| u.get(i / 2)).collect::<Vec<_>>());
            let direct = norm_ma(&hz2, &tprod, &lifted).map_err(|e| e.to_string())?;
            worst_oracle = worst_oracle.max((direct - ma).abs());
        }
    }
    ensure(worst < 1e-8 && worst_oracle < 1e-8, || {
        format!("gap {worst:e}, Z2 oracle gap {worst_oracle:e}")
    })?;
    Ok(format!(
        "Conj(S3), Irr(S3) x {{Z2,S3,D4}}, 20 functions each, max gap {worst:.1e}"
    ))
}

/// Top eigenvalue of the symmetrized tree transition matrix on `0..=radius`,
/// built from the radial random walk directly.
fn tree_oracle(q: f64, radius: usize) -> f64 {
    let n = radius + 1;
    let mut m = DMatrix::<f64>::zeros(n, n);
    let off = |k: usize| {
        if k == 0 {
            (1.0f64 * (1.0 / (q + 1.0))).sqrt()
        } else {
            (q / (q + 1.0) / (q + 1.0)).sqrt()
        }
    };
    for k in 0..radius {
        m[(k, k + 1)] = off(k);
        m[(k + 1, k)] = off(k);
    }
    SymmetricEigen::new(m).eigenvalues.max()
}

fn p2_classification() -> Outcome {
    for h in finite_tables() {
        let res = check_p2(&h, P2Options::default()).map_err(|e| e.to_string())?;
        ensure(res.status == P2Status::Holds, || {
            format!("{}: {}", h.name(), res.status)
        })?;
    }
    for radius in [20, 40, 80] {
        let h: HypergroupTable<f64> =
            family(&FamilySpec::Su2Fusion { radius }).map_err(|e| e.to_string())?;
        let res = check_p2(&h, P2Options::default()).map_err(|e| e.to_string())?;
        ensure(res.status == P2Status::Holds, || {
            format!("su2 R={radius}: {}", res.certificate)
        })?;
    }
    let h: HypergroupTable<f64> =
        family(&FamilySpec::TreeRadial { q: 2, radius: 40 }).map_err(|e| e.to_string())?;
    let res = check_p2(&h, P2Options::default()).map_err(|e| e.to_string())?;
    ensure(res.status == P2Status::Fails, || {
        format!("tree: {}", res.status)
    })?;
    let bound = res.bounds.ok_or("tree has no bounds")?.upper;
    let (e100, e200) = (tree_oracle(2.0, 100), tree_oracle(2.0, 200));
    let oracle = (4.0 * e200 - e100) / 3.0;
    let exact = 2.0 * 2f64.sqrt() / 3.0;
    ensure((bound - oracle).abs() < 1e-3, || {
        format!("bound {bound} vs oracle {oracle}")
    })?;
    ensure((oracle - exact).abs() < 1e-3, || {
        format!("oracle {oracle} vs 2 sqrt 2 / 3")
    })?;
    Ok(format!(
        "finite and su2 hold; tree fails with bound {bound:.6} (oracle {oracle:.6})"
    ))
}

fn voit_pipeline() -> Outcome {
    let h: HypergroupTable<f64> =
        family(&FamilySpec::TreeRadial { q: 2, radius: 60 }).map_err(|e| e.to_string())?;
    let c = chi0(&h).map_err(|e| e.to_string())?;
    let pair = voit_deform(&h, &c.values).map_err(|e| e.to_string())?;
    let rep = verify_axioms(&pair.deformed, 1e-10);
    ensure(rep.all_passed(), || format!("{rep}"))?;
    let p = check_p2(&pair.deformed, P2Options::default()).map_err(|e| e.to_string())?;
    ensure(p.status == P2Status::Holds, || p.certificate.clone())?;
    let w = haar_weights(&pair.deformed, 1e-10).map_err(|e| e.to_string())?;
    let haar_gap = w
        .iter()
        .zip(h.haar().iter().zip(&c.values))
        .map(|(a, (l, x))| (a - l * x * x).abs() / (l * x * x).max(1.0))
        .fold(0.0, f64::max);
    ensure(haar_gap < 1e-10, || {
        format!("deformed haar gap {haar_gap:e}")
    })?;

    let wa = weak_amenability_witness(&h, &[5, 10, 20]).map_err(|e| e.to_string())?;
    ensure(wa.constant_bound <= 1.0 + 1e-6, || {
        format!("bound {}", wa.constant_bound)
    })?;
    let residual = |x: usize| -> Vec<f64> {
        wa.entries
            .iter()
            .map(|e| {
                e.residuals
                    .iter()
                    .find(|(y, _)| *y == x)
                    .map_or(f64::NAN, |(_, v)| *v)
            })
            .collect()
    };
    let r1 = residual(1);
    ensure(r1.windows(2).all(|p| p[1] < p[0]), || {
        format!("delta_1 residuals {r1:?}")
    })?;
    // e(0) = ||xi||^2 = 1 by construction, so the residual at delta_0 vanishes identically.
    let r0 = residual(0);
    ensure(r0.iter().all(|v| *v <= 1e-12), || {
        format!("delta_0 residuals {r0:?}")
    })?;

    for g in finite_tables() {
        let wf = weak_amenability_witness(&g, &[]).map_err(|e| e.to_string())?;
        let e = &wf.entries[0].e;
        ensure(
            wf.constant_bound == 1.0 && (0..g.size()).all(|x| e.get(x) == 1.0),
            || g.name().to_string(),
        )?;
    }
    Ok(format!(
        "deformed tree valid, (P2) holds; bound {:.9}; delta_1 residuals {:.3e} > {:.3e} > {:.3e}; delta_0 residual 0 (max {:.1e})",
        wa.constant_bound,
        r1[0],
        r1[1],
        r1[2],
        r0.iter().fold(0.0f64, |a, b| a.max(*b))
    ))
}

fn amenability_construction() -> Outcome {
    let mut norms = Vec::new();
    for g in builtin_groups() {
        let tables: [HypergroupTable<Rational>; 2] = [
            conjugacy_hypergroup(&g),
            irr_exact(&g).map_err(|e| e.to_string())?,
        ];
        for h in &tables {
            let d = indicator_diagonal(h).map_err(|e| e.to_string())?;
            ensure(d.exact && d.ma_norm.is_finite(), || {
                format!("{}: exact {} norm {}", h.name(), d.exact, d.ma_norm)
            })?;
            let n = h.size();
            let tests: Vec<HFunction<Rational>> = (0..n)
                .map(|x| HFunction::delta(x, r(1)))
                .chain([HFunction::from_dense(
                    &(0..n)
                        .map(|x| Rational::ratio(x as i64 * 3 - 2, 5))
                        .collect::<Vec<_>>(),
                )])
                .collect();
            let e = HFunction::from_dense(&vec![r(1); n]);
            let ad = approximate_diagonal(h, &[e], &tests).map_err(|e| e.to_string())?;
            ensure(ad.commutator_exactly_zero && ad.commutator == 0.0, || {
                format!("{}: commutator {}", h.name(), ad.commutator)
            })?;
            norms.push(format!("{}={:.4}", h.name(), d.ma_norm));
        }
    }
    Ok(format!(
        "1_Delta exact, commutators 0; MA norms {}",
        norms.join(" ")
    ))
}

fn kac_isomorphism() -> Outcome {
    let (mut iso, mut mult) = (0.0f64, 0.0f64);
    for name in ["s3", "z4", "d4", "q8"] {
        let g = group::by_name(name).map_err(|e| e.to_string())?;
        let chars = group_characters(&g).map_err(|e| e.to_string())?;
        let dual: HypergroupTable<f64> = irr_hypergroup(&g).map_err(|e| e.to_string())?;
        let t = characters(&dual).map_err(|e| e.to_string())?;
        let classes = g.conjugacy_classes();
        let class_of: Vec<usize> = (0..g.order())
            .map(|x| {
                classes
                    .iter()
                    .position(|c| c.contains(&x))
                    .expect("partition")
            })
            .collect();
        let fs: Vec<Vec<Complex64>> = random_functions(classes.len(), 50, 4242)
            .iter()
            .map(|f| f.dense(classes.len()))
            .collect();
        for pair in fs.chunks(2) {
            let f = CentralFunction::new(&g, pair[0].clone()).map_err(|e| e.to_string())?;
            let k = CentralFunction::new(&g, pair[1].clone()).map_err(|e| e.to_string())?;
            for cf in [&f, &k] {
                // ||f||_1 with normalized Haar measure, summed over elements.
                let l1: f64 = (0..g.order())
                    .map(|x| cf.values[class_of[x]].norm())
                    .sum::<f64>()
                    / g.order() as f64;
                let a = norm_a(&dual, &t, &hat_map(&chars, cf))
                    .map_err(|e| e.to_string())?
                    .0;
                iso = iso.max((l1 - a).abs());
            }
            let conv: Vec<Complex64> = classes
                .iter()
                .map(|c| {
                    let x = c[0];
                    (0..g.order())
                        .map(|y| f.values[class_of[y]] * k.values[class_of[g.mul(g.inv(y), x)]])
                        .sum::<Complex64>()
                        / g.order() as f64
                })
                .collect();
            let lhs = hat_map(
                &chars,
                &CentralFunction::new(&g, conv).map_err(|e| e.to_string())?,
            );
            let rhs = hat_map(&chars, &f).pointwise(&hat_map(&chars, &k));
            mult = mult.max(
                (0..classes.len())
                    .map(|x| (lhs.get(x) - rhs.get(x)).norm())
                    .fold(0.0, f64::max),
            );
        }
    }
    ensure(iso < 1e-9 && mult < 1e-9, || {
        format!("isometry {iso:e}, multiplicativity {mult:e}")
    })?;

    let s3 = group::symmetric3();
    let chars = group_characters(&s3).map_err(|e| e.to_string())?;
    let sigma = chars
        .dims
        .iter()
        .position(|d| *d == 2)
        .ok_or("no 2-dimensional character")?;
    let chi = character_function(&chars, s3.name(), sigma);
    // chi_sigma = (2, 0, -1) on classes of sizes (1, 3, 2): (2 + 0 + 2) / 6.
    let expected = 2.0 / 3.0;
    let dual: HypergroupTable<f64> = irr_hypergroup(&s3).map_err(|e| e.to_string())?;
    let t = characters(&dual).map_err(|e| e.to_string())?;
    let hat = norm_a(&dual, &t, &hat_map(&chars, &chi))
        .map_err(|e| e.to_string())?
        .0;
    ensure(
        (chi.l1_norm(&chars) - expected).abs() < 1e-12 && (hat - expected).abs() < 1e-12,
        || format!("chi_sigma: {} / {hat}", chi.l1_norm(&chars)),
    )?;
    Ok(format!(
        "isometry {iso:.1e}, multiplicativity {mult:.1e}; ||chi_sigma|| = {hat:.12}"
    ))
}

fn q_int(q: f64, n: usize) -> f64 {
    (q.powi(n as i32) - q.powi(-(n as i32))) / (q - 1.0 / q)
}

fn quantum_fusion() -> Outcome {
    for radius in 1..=12 {
        let ring = FusionRing::su_q2(0.5, radius).map_err(|e| e.to_string())?;
        let hd: HypergroupTable<f64> = ring.hypergroup_d().map_err(|e| e.to_string())?;
        let rep = verify_axioms(&hd, 1e-12);
        ensure(rep.all_passed(), || format!("R={radius}: {rep}"))?;
    }
    let half = FusionRing::su_q2(0.5, 12).map_err(|e| e.to_string())?;
    let one = FusionRing::su_q2(1.0, 12).map_err(|e| e.to_string())?;
    ensure(!half.is_kac(1e-12) && one.is_kac(1e-12), || {
        "Kac flags".into()
    })?;
    let hn: HypergroupTable<Rational> = one.hypergroup_n().map_err(|e| e.to_string())?;
    let hd: HypergroupTable<Rational> = one.hypergroup_d().map_err(|e| e.to_string())?;
    ensure(
        hn.to_spec().entries == hd.to_spec().entries && hn.haar() == hd.haar(),
        || "n and d tables differ at q = 1".into(),
    )?;
    let hd: HypergroupTable<f64> = half.hypergroup_d().map_err(|e| e.to_string())?;
    let row = hd.product(1, 1).map_err(|e| e.to_string())?.clone();
    let d2 = q_int(0.5, 2);
    let expected = [
        (0usize, 1.0 / (d2 * d2)),
        (2usize, q_int(0.5, 3) / (d2 * d2)),
    ];
    ensure(
        (expected[0].1 - 0.16).abs() < 1e-12 && (expected[1].1 - 0.84).abs() < 1e-12,
        || "oracle".into(),
    )?;
    ensure(
        row.len() == 2
            && row
                .iter()
                .zip(&expected)
                .all(|((z, v), (ez, ev))| z == ez && (v - ev).abs() < 1e-12),
        || format!("row {row:?}"),
    )?;
    Ok(format!(
        "axioms R<=12, Kac flags, n = d at q = 1, row ({:.12}, {:.12})",
        row[0].1, row[1].1
    ))
}

fn reproducibility() -> Outcome {
    let commands: &[&[&str]] = &[
        &["verify", "--family", "conj", "--group", "s3"],
        &["characters", "--family", "irr", "--group", "a4"],
        &["norms", "--family", "conj", "--group", "d4", "--seed", "9"],
        &[
            "norms",
            "--family",
            "tree_radial",
            "--radius",
            "30",
            "--seed",
            "9",
        ],
        &["amenability", "--family", "irr", "--group", "q8"],
        &["deform", "--family", "tree_radial", "--radius", "40"],
        &["quantum", "--group", "s3", "--seed", "3"],
        &["p2", "--family", "su2_fusion", "--radius", "40"],
    ];
    let run = |args: &[&str], jobs: &str| -> (i32, Vec<u8>) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let tail = ["--format", "structured", "--jobs", jobs];
        let argv: Vec<&str> = ["hypergroup"]
            .iter()
            .chain(args.iter())
            .chain(tail.iter())
            .copied()
            .collect();
        let code = hypergroup_cli::run(argv, &mut out, &mut err);
        (code, out)
    };
    for args in commands {
        let first = run(args, "4");
        let second = run(args, "4");
        let serial = run(args, "1");
        ensure(first.0 == 0, || format!("{args:?} exited {}", first.0))?;
        ensure(first == second && first == serial, || {
            format!("{args:?} differs between runs")
        })?;
    }
    Ok(format!(
        "{} commands byte-identical across runs and thread counts",
        commands.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 axioms and Haar weights", axioms_and_haar),
        ("2 multiplier norm equality", norm_equality),
        ("3 completely bounded multipliers", mcb_supremum),
        ("4 (P2) classification", p2_classification),
        ("5 deformation pipeline", voit_pipeline),
        ("6 diagonal construction", amenability_construction),
        ("7 central algebra isomorphism", kac_isomorphism),
        ("8 quantum fusion rings", quantum_fusion),
        ("9 reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.1}s): {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

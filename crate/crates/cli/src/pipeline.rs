//! One pipeline per subcommand; each returns a [`Report`].

use std::path::Path;

use hypergroup::amenability::{amenability_report, weak_amenability_witness, DEFAULT_RADII};
use hypergroup::builders::{group_characters, group_fusion_ring, irr_exact, irr_hypergroup};
use hypergroup::group::{self, FiniteGroup};
use hypergroup::io;
use hypergroup::norms::{
    mcb_contexts, mcb_with_contexts, norm_a, norm_blambda, norm_ma, random_functions,
    section_interval, section_ma_interval, Interval,
};
use hypergroup::quantum::{hat_map, CentralFunction};
use hypergroup::spectral::{
    characters_seeded, check_p2, chi0, multiplicativity_residual, voit_deform, P2Options,
};
use hypergroup::{
    conjugacy_hypergroup, family, haar_weights, product, verify_axioms, Axiom, FamilySpec,
    FusionRing, HFunction, HypergroupError, HypergroupTable, Rational, Result, Scalar,
};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::report::{float, Report};
use crate::{Command, RunConfig};

pub const DEFAULT_RADIUS: usize = 40;
pub const DEFAULT_QUANTUM_RADIUS: usize = 12;

/// A table in exact or floating-point arithmetic.
#[derive(Debug, Clone)]
pub enum Loaded {
    Exact(HypergroupTable<Rational>),
    Float(HypergroupTable<f64>),
}

impl Loaded {
    pub fn float(&self) -> HypergroupTable<f64> {
        match self {
            Loaded::Exact(h) => h.to_f64(),
            Loaded::Float(h) => h.clone(),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Loaded::Exact(h) => h.name(),
            Loaded::Float(h) => h.name(),
        }
    }
}

fn invalid(msg: impl Into<String>) -> HypergroupError {
    HypergroupError::InvalidParameters(msg.into())
}

/// A built-in group by name, or a Cayley table file.
pub fn resolve_group(name: &str) -> Result<FiniteGroup> {
    let path = Path::new(name);
    if path.is_file() {
        io::load_group_file(path)
    } else {
        group::by_name(name)
    }
}

pub fn load_spec(spec: &FamilySpec) -> Result<Loaded> {
    Ok(match spec {
        FamilySpec::Cyclic { n } => Loaded::Exact(group::cyclic(*n)?.as_hypergroup()),
        FamilySpec::GroupFromCayley { name, table } => Loaded::Exact(
            FiniteGroup::from_cayley_table(name.clone(), table.clone())?.as_hypergroup(),
        ),
        FamilySpec::Conj { group } => Loaded::Exact(conjugacy_hypergroup(&resolve_group(group)?)),
        FamilySpec::Irr { group } => Loaded::Exact(irr_exact(&resolve_group(group)?)?),
        FamilySpec::Suq2Fusion { .. } => Loaded::Float(family(spec)?),
        _ => Loaded::Exact(family(spec)?),
    })
}

fn group_arg(cfg: &RunConfig) -> Result<FiniteGroup> {
    resolve_group(
        cfg.group
            .as_deref()
            .ok_or_else(|| invalid("--group is required for this family"))?,
    )
}

pub fn load_table(cfg: &RunConfig) -> Result<Loaded> {
    if let Some(path) = &cfg.input {
        let text = io::read_file(path)?;
        return if text.lines().any(|l| l.trim() == "scalar rational") {
            Ok(Loaded::Exact(io::parse_table(&text)?))
        } else {
            Ok(Loaded::Float(io::parse_table(&text)?))
        };
    }
    let name = cfg
        .family
        .as_deref()
        .ok_or_else(|| invalid("one of --family or --input is required"))?;
    let radius = cfg.radius.unwrap_or(DEFAULT_RADIUS);
    let spec = match name {
        "cyclic" => FamilySpec::Cyclic {
            n: cfg.n.ok_or_else(|| invalid("--n is required for cyclic"))?,
        },
        "group" => return Ok(Loaded::Exact(group_arg(cfg)?.as_hypergroup())),
        "conj" => return Ok(Loaded::Exact(conjugacy_hypergroup(&group_arg(cfg)?))),
        "irr" => return Ok(Loaded::Exact(irr_exact(&group_arg(cfg)?)?)),
        "su2_fusion" => FamilySpec::Su2Fusion { radius },
        "chebyshev" => FamilySpec::Chebyshev { radius },
        "suq2_fusion" => FamilySpec::Suq2Fusion {
            q: cfg
                .q
                .ok_or_else(|| invalid("--q is required for suq2_fusion"))?,
            radius,
        },
        "tree_radial" => {
            let q = cfg.q.unwrap_or(2.0);
            if q.fract() != 0.0 || q < 2.0 {
                return Err(invalid(format!(
                    "tree branching must be an integer >= 2, got {q}"
                )));
            }
            FamilySpec::TreeRadial {
                q: q as u32,
                radius,
            }
        }
        other => other.parse()?,
    };
    spec.validate()?;
    load_spec(&spec)
}

pub fn execute(command: &Command, cfg: &RunConfig) -> Result<Report> {
    if let Command::Quantum = command {
        return quantum(cfg);
    }
    let loaded = load_table(cfg)?;
    match command {
        Command::Verify => verify(&loaded, cfg),
        Command::Characters => characters_cmd(&loaded, cfg),
        Command::Norms => norms(&loaded, cfg),
        Command::Amenability => amenability(&loaded),
        Command::Deform { table_out } => deform(&loaded, table_out.as_deref()),
        Command::Product { with, table_out } => {
            product_cmd(&loaded, with, cfg, table_out.as_deref())
        }
        Command::P2 => p2(&loaded),
        Command::Quantum => unreachable!("handled above"),
    }
}

fn table_fields(r: &mut Report, loaded: &Loaded) {
    let (size, truncation, scalar, generator) = match loaded {
        Loaded::Exact(h) => (h.size(), h.truncation(), Rational::TAG, h.generator()),
        Loaded::Float(h) => (h.size(), h.truncation(), f64::TAG, h.generator()),
    };
    r.field("table", loaded.name())
        .field("scalar", scalar)
        .field("size", size);
    r.field(
        "truncation",
        truncation.map_or("none".to_string(), |t| t.to_string()),
    );
    r.field(
        "generator",
        generator.map_or("none".to_string(), |g| g.to_string()),
    );
}

fn values<T: Scalar>(v: &[T], limit: usize) -> String {
    let mut s: Vec<String> = v.iter().take(limit).map(Scalar::format_value).collect();
    if v.len() > limit {
        s.push("...".into());
    }
    s.join(" ")
}

fn complex(z: Complex64) -> String {
    format!("{}{}i", float(z.re), {
        let im = float(z.im);
        if im.starts_with('-') {
            im
        } else {
            format!("+{im}")
        }
    })
}

/// Axiom checks, with commutativity reported as a property rather than a check.
fn axiom_checks<T: Scalar>(r: &mut Report, prefix: &str, h: &HypergroupTable<T>, tol: f64) {
    let rep = verify_axioms(h, tol);
    for c in &rep.checks {
        let key = format!("{prefix}.{}", c.axiom.name());
        if c.axiom == Axiom::Commutativity {
            r.field(format!("{prefix}.commutative"), c.passed);
        } else {
            r.check(&key, c.passed);
        }
        r.number(format!("{key}.violation"), c.max_violation);
    }
}

fn haar_check<T: Scalar>(r: &mut Report, h: &HypergroupTable<T>, tol: f64) {
    r.field("haar", values(h.haar(), 12));
    match haar_weights(h, tol) {
        Ok(w) => {
            let worst = w
                .iter()
                .zip(h.haar())
                .map(|(a, b)| {
                    (a.clone() - b.clone()).abs().to_f64_lossy() / b.to_f64_lossy().abs().max(1.0)
                })
                .fold(0.0, f64::max);
            r.check_value("haar.recomputed", worst, tol);
        }
        Err(e) => {
            r.check("haar.recomputed", false).field("haar.error", e);
        }
    }
}

fn verify(loaded: &Loaded, cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::new("verify");
    table_fields(&mut r, loaded);
    match loaded {
        Loaded::Exact(h) => {
            r.number("tolerance", 0.0);
            axiom_checks(&mut r, "axiom", h, 0.0);
            haar_check(&mut r, h, 0.0);
        }
        Loaded::Float(h) => {
            r.number("tolerance", cfg.tol);
            axiom_checks(&mut r, "axiom", h, cfg.tol);
            haar_check(&mut r, h, cfg.tol);
        }
    }
    Ok(r)
}

fn characters_cmd(loaded: &Loaded, cfg: &RunConfig) -> Result<Report> {
    let h = loaded.float();
    let t = characters_seeded(&h, cfg.seed)?;
    let mut r = Report::new("characters");
    table_fields(&mut r, loaded);
    r.field("characters.count", t.len());
    let mut residual = 0.0f64;
    for (i, row) in t.values.iter().enumerate() {
        r.field(
            format!("character.{i}"),
            row.iter()
                .map(|z| complex(*z))
                .collect::<Vec<_>>()
                .join(" "),
        );
        r.number(format!("character.{i}.plancherel"), t.plancherel[i]);
        r.field(format!("character.{i}.positive"), t.positive[i]);
        residual = residual.max(multiplicativity_residual(&h, row));
    }
    let haar = h.haar();
    let mut gram_error = 0.0f64;
    for (i, a) in t.values.iter().enumerate() {
        for (j, b) in t.values.iter().enumerate() {
            let g: Complex64 = a
                .iter()
                .zip(b)
                .zip(haar)
                .map(|((x, y), l)| x * y.conj() * *l)
                .sum();
            let target = if i == j { 1.0 / t.plancherel[i] } else { 0.0 };
            gram_error = gram_error.max((g - target).norm() / target.max(1.0));
        }
    }
    let limit = cfg.tol.max(1e-9);
    r.check_value("multiplicativity", residual, limit);
    r.check_value("orthogonality", gram_error, limit);
    r.check("trivial_character", t.trivial().is_some());
    Ok(r)
}

const MCB_GROUP_LIMIT: usize = 16;

fn norms(loaded: &Loaded, cfg: &RunConfig) -> Result<Report> {
    let h = loaded.float();
    let mut r = Report::new("norms");
    table_fields(&mut r, loaded);
    r.field("seed", cfg.seed);
    if h.is_truncated() {
        return section_norms(&h, cfg, r);
    }
    let t = characters_seeded(&h, cfg.seed)?;
    let n = h.size();
    let us = random_functions(n, cfg.count.unwrap_or(5), cfg.seed);
    let groups: Vec<FiniteGroup> = if n <= MCB_GROUP_LIMIT {
        vec![group::cyclic(2)?, group::symmetric3(), group::dihedral4()]
    } else {
        Vec::new()
    };
    let contexts = mcb_contexts(&h, &groups)?;
    r.field(
        "mcb.groups",
        groups
            .iter()
            .map(|g| g.name())
            .collect::<Vec<_>>()
            .join(" "),
    );
    r.field("convention.b_equals_blambda", true);
    let rows = us
        .par_iter()
        .map(|u| {
            let (a, fact) = norm_a(&h, &t, u)?;
            let (b, dual) = norm_blambda(&h, &t, u)?;
            let ma = norm_ma(&h, &t, u)?;
            let mcb = if contexts.is_empty() {
                None
            } else {
                Some(mcb_with_contexts(&h, &t, u, &contexts, cfg.seed)?.value)
            };
            Ok((a, b, ma, mcb, fact, dual))
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut gap_ma, mut gap_a, mut fact_res, mut attained, mut dual_norm, mut gap_mcb) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (k, (a, b, ma, mcb, fact, dual)) in rows.iter().enumerate() {
        r.number(format!("u.{k}.a"), *a)
            .number(format!("u.{k}.blambda"), *b)
            .number(format!("u.{k}.ma"), *ma);
        if let Some(m) = mcb {
            r.number(format!("u.{k}.mcb_approx"), *m);
            gap_mcb = gap_mcb.max((m - ma).abs());
        }
        gap_ma = gap_ma.max((ma - b).abs());
        gap_a = gap_a.max((b - a).abs());
        fact_res = fact_res.max(fact.residual);
        attained = attained.max((fact.norm_product - a).abs());
        dual_norm = dual_norm.max(dual.operator_norm);
    }
    r.check_value("ma_equals_blambda", gap_ma, 1e-8);
    r.check_value("blambda_equals_a", gap_a, 1e-8);
    r.check_value("factorization_residual", fact_res, 1e-10);
    r.check_value("factorization_attains_norm", attained, 1e-9);
    r.check_value("dual_witness_contraction", dual_norm - 1.0, 1e-9);
    if !contexts.is_empty() {
        r.check_value("mcb_equals_ma", gap_mcb, 1e-8);
    }
    Ok(r)
}

fn interval(i: &Interval) -> String {
    format!("[{}, {}]", float(i.lower), float(i.upper))
}

fn section_norms(h: &HypergroupTable<f64>, cfg: &RunConfig, mut r: Report) -> Result<Report> {
    let c = chi0(h)?;
    let pair = voit_deform(h, &c.values)?;
    let ball = h.complete_ball().min(5);
    let one = Complex64::new(1.0, 0.0);
    let mut tests: Vec<HFunction<Complex64>> = (0..3.min(ball + 1))
        .map(|x| HFunction::delta(x, one))
        .collect();
    tests.extend(random_functions(ball + 1, cfg.count.unwrap_or(3), cfg.seed));
    let ones = vec![1.0; h.size()];
    let (mut iso, mut order, mut contraction) = (0.0f64, 0.0f64, 0.0f64);
    for (k, u) in tests.iter().enumerate() {
        let ia = section_interval(h, u, &c.values)?;
        let ratio = u.map(|x, v| v / c.values[x]);
        let i0 = section_interval(&pair.deformed, &ratio, &ones)?;
        let ima = section_ma_interval(&pair.deformed, u)?;
        let plain0 = section_interval(&pair.deformed, u, &ones)?;
        r.field(format!("u.{k}.a"), interval(&ia));
        r.field(format!("u.{k}.blambda"), interval(&ia));
        r.field(format!("u.{k}.a_deformed_of_ratio"), interval(&i0));
        r.field(format!("u.{k}.ma"), interval(&ima));
        let scale = ia.upper.max(1.0);
        iso = iso.max((ia.lower - i0.lower).abs().max((ia.upper - i0.upper).abs()) / scale);
        order = order.max((ia.lower - ia.upper).max(ima.lower - ima.upper));
        contraction = contraction.max(plain0.lower - ia.upper);
    }
    r.field("convention.intervals", "certified lower and upper bounds");
    r.check_value("ratio_isometry_interval", iso, 1e-9);
    r.check_value("interval_order", order, 1e-12);
    r.check_value("deformed_norm_contraction", contraction, 1e-12);
    Ok(r)
}

fn amenability(loaded: &Loaded) -> Result<Report> {
    let rep = match loaded {
        Loaded::Exact(h) => amenability_report(h)?,
        Loaded::Float(h) => amenability_report(h)?,
    };
    let h = loaded.float();
    let mut r = Report::new("amenability");
    table_fields(&mut r, loaded);
    r.field("p2", rep.p2);
    r.list(
        "phi_values",
        &rep.phi_values[..rep.phi_values.len().min(12)],
    );
    let opt = |v: Option<f64>| v.map_or("none".to_string(), float);
    r.field(
        "value_set_size",
        rep.value_set_size
            .map_or("unbounded".to_string(), |v| v.to_string()),
    );
    r.field("diagonal_psi_norm", opt(rep.diagonal_psi_norm));
    r.field("phi_inverse_ma_norm", opt(rep.phi_inverse_ma_norm));
    r.field("one_delta_ma_norm", opt(rep.one_delta_ma_norm));
    r.field("approx_diagonal_bound", opt(rep.approx_diagonal_bound));
    r.number(
        "weak_amenability_constant_bound",
        rep.weak_amenability_constant_bound,
    );
    for (i, note) in rep.notes.iter().enumerate() {
        r.field(format!("note.{i}"), note);
    }
    if h.is_truncated() {
        let limit = h.complete_ball();
        let radii: Vec<usize> = DEFAULT_RADII
            .iter()
            .copied()
            .filter(|x| *x <= limit)
            .collect();
        let w = weak_amenability_witness(&h, &radii)?;
        let mut previous: Option<f64> = None;
        let mut decreasing = true;
        let mut fixed_point = 0.0f64;
        for e in &w.entries {
            r.field(
                format!("witness.r{}.ma_bound", e.radius),
                interval(&e.ma_bound),
            );
            for (x, v) in &e.residuals {
                r.number(format!("witness.r{}.residual.{x}", e.radius), *v);
            }
            let at = |x: usize| e.residuals.iter().find(|(y, _)| *y == x).map(|(_, v)| *v);
            fixed_point = fixed_point.max(at(0).unwrap_or(0.0));
            if let Some(v) = at(1) {
                decreasing &= previous.is_none_or(|p| v < p);
                previous = Some(v);
            }
        }
        r.check_value("weak_amenability_bound", w.constant_bound - 1.0, 1e-6);
        r.check("residuals_decreasing", decreasing);
        r.check_value("identity_residual", fixed_point, 1e-12);
    } else {
        r.check("one_delta_exact", rep.one_delta_exact == Some(true));
        r.check(
            "commutator_exactly_zero",
            rep.commutator_exactly_zero == Some(true),
        );
        r.check("submultiplicative", rep.submultiplicative(1e-9));
        let finite = [
            rep.diagonal_psi_norm,
            rep.phi_inverse_ma_norm,
            rep.one_delta_ma_norm,
            rep.approx_diagonal_bound,
        ]
        .iter()
        .all(|v| v.is_some_and(f64::is_finite));
        r.check("norms_finite", finite);
        r.check(
            "weak_amenability_constant_one",
            rep.weak_amenability_constant_bound == 1.0,
        );
    }
    Ok(r)
}

fn deform(loaded: &Loaded, table_out: Option<&Path>) -> Result<Report> {
    let h = loaded.float();
    let c = chi0(&h)?;
    let pair = voit_deform(&h, &c.values)?;
    let mut r = Report::new("deform");
    table_fields(&mut r, loaded);
    r.number("chi0.top", c.top);
    r.list("chi0.values", &c.values[..c.values.len().min(8)]);
    r.field("chi0.dominated_samples", c.dominated);
    r.check_value("chi0.multiplicativity", c.multiplicativity_residual, 1e-9);
    if h.size() > 1 {
        if let Ok(v) = pair.deformed.coeff(1, 1, 0) {
            r.number("deformed.c_1_1_0", v);
        }
    }
    axiom_checks(&mut r, "deformed.axiom", &pair.deformed, 1e-10);
    let expected: Vec<f64> = h
        .haar()
        .iter()
        .zip(&c.values)
        .map(|(l, x)| l * x * x)
        .collect();
    let recomputed = haar_weights(&pair.deformed, 1e-10)?;
    let worst = recomputed
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).abs() / b.max(1.0))
        .fold(0.0, f64::max);
    r.check_value("deformed.haar", worst, 1e-10);
    r.check_value("deformed.dual_characters", pair.dual_residual, 1e-9);
    let p = check_p2(&pair.deformed, P2Options::default())?;
    r.field("deformed.p2", p.status);
    r.check(
        "deformed.p2_holds",
        p.status == hypergroup::spectral::P2Status::Holds,
    );
    if let Some(path) = table_out {
        io::save_table(path, &pair.deformed)?;
        r.field("table_out", path.display());
    }
    Ok(r)
}

fn product_cmd(
    loaded: &Loaded,
    with: &str,
    cfg: &RunConfig,
    table_out: Option<&Path>,
) -> Result<Report> {
    let second = match with.parse::<FamilySpec>() {
        Ok(spec) => load_spec(&spec)?,
        Err(_) => Loaded::Exact(resolve_group(with)?.as_hypergroup()),
    };
    let mut r = Report::new("product");
    r.field("left", loaded.name()).field("right", second.name());
    fn body<T: Scalar>(
        r: &mut Report,
        a: &HypergroupTable<T>,
        b: &HypergroupTable<T>,
        tol: f64,
        out: Option<&Path>,
    ) -> Result<()> {
        let p = product(a, b)?;
        r.field("table", p.name()).field("size", p.size());
        axiom_checks(r, "axiom", &p, tol);
        let n2 = b.size();
        let worst = p
            .haar()
            .iter()
            .enumerate()
            .map(|(i, l)| {
                (l.clone() - a.haar()[i / n2].clone() * b.haar()[i % n2].clone())
                    .abs()
                    .to_f64_lossy()
            })
            .fold(0.0, f64::max);
        r.check_value("haar_multiplicative", worst, tol);
        if let Some(path) = out {
            io::save_table(path, &p)?;
            r.field("table_out", path.display());
        }
        Ok(())
    }
    match (loaded, &second) {
        (Loaded::Exact(a), Loaded::Exact(b)) => body(&mut r, a, b, 0.0, table_out)?,
        _ => body(&mut r, &loaded.float(), &second.float(), cfg.tol, table_out)?,
    }
    Ok(r)
}

fn p2(loaded: &Loaded) -> Result<Report> {
    let h = loaded.float();
    let res = check_p2(&h, P2Options::default())?;
    let mut r = Report::new("p2");
    table_fields(&mut r, loaded);
    r.field("p2", res.status);
    if let Some(b) = res.bounds {
        r.number("bound.lower", b.lower);
        r.number("bound.lower_extrapolated", b.lower_extrapolated);
        r.number("bound.upper", b.upper);
        r.field("bound.section", b.section);
    }
    r.field("certificate", &res.certificate);
    Ok(r)
}

fn ring_fields(r: &mut Report, ring: &FusionRing, tol: f64) -> Result<()> {
    r.field("ring", ring.name())
        .field("size", ring.len())
        .field("truncated", ring.is_truncated());
    r.field(
        "ndims",
        ring.ndims()
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(" "),
    );
    r.list("ddims", ring.ddims());
    let kac = ring.is_kac(1e-12);
    r.field("kac", kac);
    let hn: HypergroupTable<f64> = ring.hypergroup_n()?;
    let hd: HypergroupTable<f64> = ring.hypergroup_d()?;
    axiom_checks(r, "n.axiom", &hn, tol);
    axiom_checks(r, "d.axiom", &hd, tol);
    if kac {
        r.check("kac.tables_agree", hn == hd.clone().with_name(hn.name()));
    }
    if hd.size() > 1 {
        if let Ok(row) = hd.product(1, 1) {
            let s = row
                .iter()
                .map(|(z, v)| format!("{z}:{}", float(*v)))
                .collect::<Vec<_>>()
                .join(" ");
            r.field("d.row.1.1", s);
        }
    }
    Ok(())
}

fn quantum(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::new("quantum");
    let tol = cfg.tol.max(1e-12);
    if let Some(path) = &cfg.input {
        let ring = io::load_fusion_file(path)?;
        ring_fields(&mut r, &ring, tol)?;
        return Ok(r);
    }
    let fam = cfg.family.as_deref();
    if cfg.group.is_some() && !matches!(fam, Some("su2_fusion" | "suq2_fusion")) {
        let g = group_arg(cfg)?;
        let ring = group_fusion_ring(&g)?;
        ring_fields(&mut r, &ring, tol)?;
        return zl1_checks(&mut r, &g, cfg).map(|_| r);
    }
    let q = match fam {
        Some("su2_fusion") => 1.0,
        Some("suq2_fusion") | None => cfg.q.unwrap_or(1.0),
        Some(other) => return Err(invalid(format!("quantum does not handle family `{other}`"))),
    };
    let ring = FusionRing::su_q2(q, cfg.radius.unwrap_or(DEFAULT_QUANTUM_RADIUS))?;
    r.number("q", q);
    ring_fields(&mut r, &ring, tol)?;
    Ok(r)
}

fn zl1_checks(r: &mut Report, g: &FiniteGroup, cfg: &RunConfig) -> Result<()> {
    let chars = group_characters(g)?;
    let dual: HypergroupTable<f64> = irr_hypergroup(g)?;
    let t = characters_seeded(&dual, cfg.seed)?;
    let k = chars.classes.len();
    let fs: Vec<CentralFunction> = random_functions(k, cfg.count.unwrap_or(50), cfg.seed)
        .iter()
        .map(|f| CentralFunction::new(g, f.dense(k)))
        .collect::<Result<_>>()?;
    let (mut iso, mut mult) = (0.0f64, 0.0f64);
    for pair in fs.chunks(2) {
        for f in pair {
            let a = norm_a(&dual, &t, &hat_map(&chars, f))?.0;
            iso = iso.max((f.l1_norm(&chars) - a).abs());
        }
        if let [f, h] = pair {
            let lhs = hat_map(&chars, &f.convolve(h, g));
            let rhs = hat_map(&chars, f).pointwise(&hat_map(&chars, h));
            mult = mult.max(
                (0..k)
                    .map(|x| (lhs.get(x) - rhs.get(x)).norm())
                    .fold(0.0, f64::max),
            );
        }
    }
    r.field("zl1.samples", fs.len());
    r.check_value("zl1.isometry", iso, 1e-9);
    r.check_value("zl1.multiplicativity", mult, 1e-9);
    let top = chars.dims.len() - 1;
    let chi = hypergroup::quantum::character_function(&chars, g.name(), top);
    r.number("zl1.top_character.norm", chi.l1_norm(&chars));
    r.number(
        "zl1.top_character.hat_norm",
        norm_a(&dual, &t, &hat_map(&chars, &chi))?.0,
    );
    Ok(())
}

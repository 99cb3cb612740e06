//! Command orchestration.

use std::f64::consts::PI;
use std::time::Instant;

use serde_json::json;

use campanato_core::campanato::{
    arc_seminorm, classify_space, derivative_growth, star_seminorm, DiskGrid,
};
use campanato_core::carleson::{carleson_norm, fourth_moment_check};
use campanato_core::criteria::{
    boundedness_profile, derivative_criterion, derivative_vanishing_profile, level_set_decay_curve,
    norm_transfer_bound_check, regime, ring_maxima, vanishing_profile, CaseSplit, VanishingProfile,
};
use campanato_core::hardy::{composition_norm_check, h2_norm, hardy_littlewood_check, QuadratureGrid};
use campanato_core::nevanlinna::{
    change_of_variable_check, counting_function, norm_counting_identity, preimages, smith_bound_check,
};
use campanato_core::{certify_self_map, AnalyticMap, Complex64, DiskPoint, Error, SelfMapCertificate};

use crate::config::{check_pair, Command, Options, RunConfig, MAX_CARLESON_DEPTH, MAX_RAYS};
use crate::dsl::parse_symbol;
use crate::report::{to_value, CertificateSummary, Entry, Report, Table, Timings, SCHEMA_VERSION};
use crate::CliError;

/// Tolerance for the integral identities.
pub const IDENTITY_TOL: f64 = 1e-4;
/// Tolerance for the Hardy-Littlewood identity.
pub const HARDY_LITTLEWOOD_TOL: f64 = 1e-6;
/// Allowed excess of the sub-mean-value ratio over 1.
pub const SUB_MEAN_TOL: f64 = 1e-6;
/// Levels of the level-set decay curve.
pub const DECAY_LEVELS: [f64; 3] = [0.9, 0.99, 0.999];
/// `|phi(a)|` threshold of the level-set decay curve.
pub const DECAY_SPLIT: f64 = 0.9;
/// Angles per radius of the sub-mean-value target grid.
pub const SUB_MEAN_ANGLES: usize = 32;

pub fn execute(config: &RunConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let opts = &config.options;
    let mut certificate = None;
    let mut table = None;
    let results = match &config.command {
        Command::Norm { symbol, p, arc_levels } => norm(opts, &parse_symbol(symbol)?, *p, *arc_levels)?,
        Command::Criterion { symbol, p, q, split } => {
            check_pair(*p, *q)?;
            let cert = certify(opts, symbol)?;
            let (entries, samples) = criterion(opts, &cert, *p, *q, *split)?;
            certificate = Some(CertificateSummary::new(&cert));
            table = Some(samples);
            entries
        }
        Command::Vanishing { symbol, p, q, rays } => {
            check_pair(*p, *q)?;
            let cert = certify(opts, symbol)?;
            let (entries, rows) = vanishing(&cert, *p, *q, check_rays(*rays)?)?;
            certificate = Some(CertificateSummary::new(&cert));
            table = Some(rows);
            entries
        }
        Command::Identities { all, symbol } => match (all, symbol) {
            (_, Some(s)) => {
                let cert = certify(opts, s)?;
                certificate = Some(CertificateSummary::new(&cert));
                symbol_identities(opts, &cert)?
            }
            (true, None) => catalog_identities(opts)?,
            (false, None) => return Err(CliError::Usage("identities needs --all or --symbol".into())),
        },
        Command::Nevanlinna { symbol, f, w } => {
            let cert = certify(opts, symbol)?;
            certificate = Some(CertificateSummary::new(&cert));
            nevanlinna(opts, &cert, &parse_symbol(f)?, w.as_deref())?
        }
        Command::Carleson { symbol, p, depth } => carleson(opts, &parse_symbol(symbol)?, *p, *depth)?,
        Command::FullReport { symbol, p, q, f, rays } => {
            check_pair(*p, *q)?;
            let cert = certify(opts, symbol)?;
            let f = parse_symbol(f)?;
            let (mut entries, samples) = criterion(opts, &cert, *p, *q, campanato_core::criteria::DEFAULT_SPLIT)?;
            entries.extend(vanishing(&cert, *p, *q, check_rays(*rays)?)?.0);
            entries.extend(full_extras(opts, &cert, *p, *q, &f)?);
            certificate = Some(CertificateSummary::new(&cert));
            table = Some(samples);
            entries
        }
    };
    let timings = opts.timings.then(|| Timings {
        total_seconds: start.elapsed().as_secs_f64(),
    });
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        certificate,
        results,
        timings,
        table,
    })
}

fn check_rays(rays: usize) -> Result<usize, CliError> {
    if !(1..=MAX_RAYS).contains(&rays) {
        return Err(CliError::Usage(format!("--rays must lie in [1, {MAX_RAYS}]")));
    }
    Ok(rays)
}

fn certify(opts: &Options, symbol: &str) -> Result<SelfMapCertificate, CliError> {
    let map = parse_symbol(symbol)?;
    Ok(certify_self_map(&map, opts.cert_samples)?)
}

fn disk_grid_json(g: &DiskGrid) -> serde_json::Value {
    to_value(g)
}

fn quad_json(g: QuadratureGrid) -> serde_json::Value {
    to_value(g)
}

fn point_json(a: DiskPoint) -> [f64; 2] {
    [a.value().re, a.value().im]
}

fn norm(opts: &Options, f: &AnalyticMap, p: f64, arc_levels: u32) -> Result<Vec<Entry>, CliError> {
    if !(0.0..2.0).contains(&p) {
        return Err(CliError::Usage(format!("--p must lie in [0, 2), got {p}")));
    }
    let grid = opts.disk_grid()?;
    let m = opts.level_nodes()?;
    let star = star_seminorm(f, p, &grid)?;
    let arc = arc_seminorm(f, p, arc_levels, m)?;
    let growth = derivative_growth(f, p, &grid)?;
    let g = disk_grid_json(&grid);
    let arc_grid = json!({ "arc_levels": arc_levels, "circle_nodes": m });
    let ratio = if star.value > 0.0 { Some(arc / star.value) } else { None };
    Ok(vec![
        Entry::new("space", classify_space(p), json!(null)),
        Entry::new("h2_norm", h2_norm(f)?, json!(null)),
        Entry::new("star_seminorm", star.value, g.clone()).details(json!({ "argmax": point_json(star.argmax) })),
        Entry::new("arc_seminorm", arc, arc_grid.clone()),
        Entry::new("arc_to_star_ratio", ratio, arc_grid),
        Entry::new("derivative_growth", growth.value, g).details(json!({ "argmax": point_json(growth.argmax) })),
    ])
}

fn criterion(
    opts: &Options,
    phi: &SelfMapCertificate,
    p: f64,
    q: f64,
    split: f64,
) -> Result<(Vec<Entry>, Table), CliError> {
    if !(split > 0.0 && split < 1.0) {
        return Err(CliError::Usage("--split must lie in (0, 1)".into()));
    }
    let grid = opts.disk_grid()?;
    let (profile, verdict) = boundedness_profile(phi, p, q, &grid)?;
    let rings = ring_maxima(&profile.samples.iter().map(|s| (s.depth, s.theta)).collect::<Vec<_>>());
    let mut inner_max: f64 = 0.0;
    let mut outer_max: f64 = 0.0;
    for s in &profile.samples {
        if s.phi_a.norm() <= split {
            inner_max = inner_max.max(s.theta);
        } else {
            outer_max = outer_max.max(s.theta);
        }
    }
    let case_split = CaseSplit {
        s: split,
        inner_max,
        outer_max,
    };
    let deriv = derivative_criterion(phi, p, &grid)?;
    let g = disk_grid_json(&grid);
    let curve: Vec<_> = rings
        .iter()
        .enumerate()
        .map(|(d, v)| json!({ "depth": d, "radius": DiskGrid::radius(d as u32), "max": v }))
        .collect();
    let entries = vec![
        Entry::new("theta_sup", profile.max_theta, g.clone())
            .verdict(&verdict)
            .curve(curve)
            .details(json!({
                "p": p,
                "q": q,
                "argmax": point_json(profile.argmax),
                "case_split": case_split,
                "regime": regime(p, q),
            })),
        Entry::new("derivative_sup", deriv.max_value, g)
            .verdict(&deriv.verdict)
            .details(json!({ "p": p, "argmax": point_json(deriv.argmax) })),
    ];
    let rows = profile
        .samples
        .iter()
        .map(|s| {
            vec![
                s.a.value().re.to_string(),
                s.a.value().im.to_string(),
                s.depth.to_string(),
                s.phi_a.re.to_string(),
                s.phi_a.im.to_string(),
                s.theta.to_string(),
            ]
        })
        .collect();
    Ok((
        entries,
        Table {
            header: vec!["a_re", "a_im", "depth", "phi_re", "phi_im", "theta"],
            rows,
        },
    ))
}

fn ray_rows(profile: &VanishingProfile, rows: &mut Vec<Vec<String>>, quantity: &str) {
    for (k, ray) in profile.rays.iter().enumerate() {
        for pt in &ray.points {
            rows.push(vec![
                quantity.to_string(),
                k.to_string(),
                ray.angle.to_string(),
                pt.a.value().re.to_string(),
                pt.a.value().im.to_string(),
                pt.image_gap.to_string(),
                pt.value.to_string(),
            ]);
        }
    }
}

fn vanishing(phi: &SelfMapCertificate, p: f64, q: f64, rays: usize) -> Result<(Vec<Entry>, Table), CliError> {
    let t = vanishing_profile(phi, p, q, rays)?;
    let d = derivative_vanishing_profile(phi, p, rays)?;
    let label = regime(p, q);
    let mut rows = Vec::new();
    ray_rows(&t, &mut rows, "theta");
    ray_rows(&d, &mut rows, "derivative");
    let entries = vec![
        Entry::new("theta_vanishing", t.flag, json!({ "rays": rays }))
            .curve(&t.rays)
            .details(json!({ "boundary_sup": t.boundary_sup, "regime": label })),
        Entry::new("derivative_vanishing", d.flag, json!({ "rays": rays }))
            .curve(&d.rays)
            .details(json!({ "boundary_sup": d.boundary_sup })),
    ];
    Ok((
        entries,
        Table {
            header: vec!["quantity", "ray", "angle", "a_re", "a_im", "image_gap", "value"],
            rows,
        },
    ))
}

fn full_extras(
    opts: &Options,
    phi: &SelfMapCertificate,
    p: f64,
    q: f64,
    f: &AnalyticMap,
) -> Result<Vec<Entry>, CliError> {
    let grid = opts.disk_grid()?;
    let mut out = Vec::new();
    if p <= 1.0 {
        let t = norm_transfer_bound_check(phi, p, f, &grid)?;
        out.push(
            Entry::new("norm_transfer_bound", json!({ "lhs": t.lhs, "rhs": t.rhs }), disk_grid_json(&grid))
                .pass(t.holds())
                .details(json!({ "f": f.to_string(), "constant": t.constant })),
        );
    }
    if q == 1.0 {
        let m = opts.level_nodes()?;
        let curve = level_set_decay_curve(phi, p, DECAY_SPLIT, &DECAY_LEVELS, &grid, m)?;
        out.push(
            Entry::new(
                "level_set_decay",
                curve.last().map(|c| c.value),
                json!({ "disk": disk_grid_json(&grid), "level_nodes": m }),
            )
            .curve(&curve)
            .details(json!({ "s": DECAY_SPLIT })),
        );
    }
    match norm_counting_identity(phi, DiskPoint::origin()) {
        Ok(c) => out.push(
            Entry::new("norm_counting_identity", json!({ "lhs": c.lhs, "rhs": c.rhs }), json!(null))
                .pass(c.relative_gap(1e-12) <= IDENTITY_TOL)
                .details(json!({ "a": [0.0, 0.0] })),
        ),
        Err(Error::NotRational | Error::DegreeBudgetExceeded { .. }) => out.push(
            Entry::new("norm_counting_identity", json!(null), json!(null))
                .details(json!({ "skipped": "symbol does not reduce to a rational equation within budget" })),
        ),
        Err(e) => return Err(e.into()),
    }
    Ok(out)
}

fn identity_entry(name: &str, label: String, c: campanato_core::hardy::Comparison, grid: serde_json::Value, tol: f64) -> Entry {
    let gap = c.relative_gap(1e-12);
    Entry::new(name, json!({ "lhs": c.lhs, "rhs": c.rhs, "relative_gap": gap }), grid)
        .pass(gap <= tol)
        .details(json!({ "case": label, "tolerance": tol }))
}

fn sub_mean_entry(psi: &SelfMapCertificate) -> Result<Entry, CliError> {
    let s = smith_bound_check(psi, SUB_MEAN_ANGLES)?;
    Ok(Entry::new("counting_sub_mean_value", json!({ "w": s.w, "worst_ratio": s.worst_ratio }), json!({ "angles": SUB_MEAN_ANGLES }))
        .pass(s.worst_ratio <= 1.0 + SUB_MEAN_TOL)
        .details(json!({ "case": psi.map.to_string() })))
}

fn composition_entry(g: &AnalyticMap, psi: &SelfMapCertificate) -> Result<Entry, CliError> {
    let c = composition_norm_check(g, psi)?;
    Ok(Entry::new("composition_norm", json!({ "lhs": c.lhs, "rhs": c.rhs, "ratio": c.ratio() }), json!(null))
        .pass(c.lhs <= c.rhs)
        .details(json!({ "case": format!("{g} o {}", psi.map) })))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn test_functions() -> Vec<AnalyticMap> {
    vec![
        AnalyticMap::identity(),
        AnalyticMap::Monomial(2),
        AnalyticMap::Taylor {
            coeffs: vec![c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)],
            tail_bound: 0.0,
        },
    ]
}

fn sample_points() -> Vec<DiskPoint> {
    vec![
        DiskPoint::origin(),
        DiskPoint::new(c(0.5, 0.0)).expect("inside"),
        DiskPoint::new(Complex64::from_polar(0.8, PI / 3.0)).expect("inside"),
    ]
}

fn symbol_identities(opts: &Options, phi: &SelfMapCertificate) -> Result<Vec<Entry>, CliError> {
    let grid = opts.quadrature_grid()?;
    let mut out = Vec::new();
    for f in test_functions() {
        let r = change_of_variable_check(&f, phi, grid)?;
        out.push(identity_entry("change_of_variables", format!("{f} o {}", phi.map), r, quad_json(grid), IDENTITY_TOL));
    }
    for a in sample_points() {
        let r = norm_counting_identity(phi, a)?;
        out.push(identity_entry("norm_counting_identity", format!("a = {:?}", point_json(a)), r, json!(null), IDENTITY_TOL));
    }
    if phi.value_at_zero().norm() <= 1e-12 {
        out.push(sub_mean_entry(phi)?);
        for g in [AnalyticMap::identity(), AnalyticMap::Monomial(2)] {
            out.push(composition_entry(&g, phi)?);
        }
    }
    Ok(out)
}

fn catalog_identities(opts: &Options) -> Result<Vec<Entry>, CliError> {
    let grid = opts.quadrature_grid()?;
    let mut out = Vec::new();
    let mut hl_cases: Vec<AnalyticMap> = (1..=5).map(AnalyticMap::Monomial).collect();
    hl_cases.push(AnalyticMap::Taylor {
        coeffs: vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)],
        tail_bound: 0.0,
    });
    for f in hl_cases {
        let r = hardy_littlewood_check(&f, grid)?;
        out.push(identity_entry("hardy_littlewood", f.to_string(), r, quad_json(grid), HARDY_LITTLEWOOD_TOL));
    }
    let half = DiskPoint::new(c(0.5, 0.0)).expect("inside");
    let third = DiskPoint::new(c(0.3, 0.0)).expect("inside");
    let symbols = [
        AnalyticMap::Monomial(2),
        AnalyticMap::affine(c(0.5, 0.0), c(0.5, 0.0)),
        AnalyticMap::mobius(half),
        AnalyticMap::product(AnalyticMap::identity(), AnalyticMap::mobius(half)),
    ];
    for phi in &symbols {
        let cert = certify_self_map(phi, opts.cert_samples)?;
        for f in test_functions() {
            let r = change_of_variable_check(&f, &cert, grid)?;
            out.push(identity_entry("change_of_variables", format!("{f} o {phi}"), r, quad_json(grid), IDENTITY_TOL));
        }
        for a in sample_points() {
            let r = norm_counting_identity(&cert, a)?;
            out.push(identity_entry(
                "norm_counting_identity",
                format!("{phi} at a = {:?}", point_json(a)),
                r,
                json!(null),
                IDENTITY_TOL,
            ));
        }
    }
    let inner_symbols = [
        AnalyticMap::identity(),
        AnalyticMap::Monomial(2),
        AnalyticMap::Monomial(3),
        AnalyticMap::product(AnalyticMap::identity(), AnalyticMap::mobius(third)),
    ];
    for psi in &inner_symbols {
        let cert = certify_self_map(psi, opts.cert_samples)?;
        out.push(sub_mean_entry(&cert)?);
        for g in [AnalyticMap::identity(), AnalyticMap::Monomial(2)] {
            out.push(composition_entry(&g, &cert)?);
        }
    }
    Ok(out)
}

fn nevanlinna(
    opts: &Options,
    phi: &SelfMapCertificate,
    f: &AnalyticMap,
    w: Option<&str>,
) -> Result<Vec<Entry>, CliError> {
    let grid = opts.quadrature_grid()?;
    let mut out = Vec::new();
    if let Some(w) = w {
        let w = crate::dsl::parse_complex(w)?;
        let set = preimages(&phi.map, w)?;
        let roots: Vec<_> = set
            .roots
            .iter()
            .map(|r| json!({ "z": point_json(r.z), "multiplicity": r.multiplicity }))
            .collect();
        out.push(Entry::new("preimages", roots, json!(null)).details(json!({ "w": [w.re, w.im] })));
        out.push(Entry::new("counting_function", counting_function(&phi.map, w)?, json!(null)).details(json!({ "w": [w.re, w.im] })));
    }
    let r = change_of_variable_check(f, phi, grid)?;
    out.push(identity_entry("change_of_variables", format!("{f} o {}", phi.map), r, quad_json(grid), IDENTITY_TOL));
    let r = norm_counting_identity(phi, DiskPoint::origin())?;
    out.push(identity_entry("norm_counting_identity", "a = [0.0, 0.0]".into(), r, json!(null), IDENTITY_TOL));
    if phi.value_at_zero().norm() <= 1e-12 {
        out.push(sub_mean_entry(phi)?);
    }
    Ok(out)
}

fn carleson(opts: &Options, f: &AnalyticMap, p: f64, depth: u32) -> Result<Vec<Entry>, CliError> {
    if depth > MAX_CARLESON_DEPTH {
        return Err(CliError::Usage(format!("--depth is capped at {MAX_CARLESON_DEPTH}")));
    }
    let est = carleson_norm(f, p, depth)?;
    let mut out = vec![Entry::new("carleson_norm", est.value, json!({ "dyadic_depth": depth }))
        .details(json!({ "p": p, "witness_arc": est.witness_arc }))];
    let f0 = f.eval(c(0.0, 0.0))?.norm();
    if p > 0.0 && p < 2.0 && f0 <= 1e-12 {
        let grid = opts.disk_grid()?;
        let m = opts.level_nodes()?;
        let fm = fourth_moment_check(f, p, &grid, m)?;
        out.push(
            Entry::new("fourth_moment", json!({ "lhs": fm.lhs, "rhs": fm.rhs, "ratio": fm.ratio() }), json!({ "disk": disk_grid_json(&grid), "level_nodes": m }))
                .details(json!({ "branch": fm.branch, "star_seminorm": fm.star_seminorm })),
        );
    } else {
        out.push(
            Entry::new("fourth_moment", json!(null), json!(null))
                .details(json!({ "skipped": "needs f(0) = 0 and p in (0, 2)" })),
        );
    }
    Ok(out)
}

use std::f64::consts::PI;
use std::sync::Arc;

use hilab::cyclic::tau_g_cochain;
use hilab::fredholm::{PROJECTOR_TOL, RANK_TOL};
use hilab::groupcoh::VanEstOptions;
use hilab::kernels::{elementary_idempotent, slice_projection};
use hilab::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::*;
use crate::report::{Cell, Report};

/// Why an experiment could not produce a report.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numeric(hilab::Error),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 2,
            Failure::Numeric(e) => match e {
                Error::InvalidArgument(_) | Error::ModelMismatch(_) | Error::LatticeMismatch(_) | Error::DegreeMismatch { .. } => 2,
                _ => 3,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Io(_) => "io",
            Failure::Numeric(_) if self.exit_code() == 2 => "config",
            Failure::Numeric(_) => "numeric",
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Usage(s) | Failure::Io(s) => s.clone(),
            Failure::Numeric(e) => e.to_string(),
        }
    }
}

impl From<hilab::Error> for Failure {
    fn from(e: hilab::Error) -> Self {
        Failure::Numeric(e)
    }
}

type Run = Result<Report, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn positive(name: &str, x: f64) -> Result<(), Failure> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        usage(format!("--{name} must be positive, got {x}"))
    }
}

fn nonzero(name: &str, x: usize) -> Result<(), Failure> {
    if x > 0 {
        Ok(())
    } else {
        usage(format!("--{name} must be positive"))
    }
}

/// Parses `x,y;x,y;...`.
pub fn parse_points(s: &str) -> Result<Vec<Vec<f64>>, Failure> {
    s.split(';')
        .map(|p| {
            p.split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|_| Failure::Usage(format!("bad coordinate {c:?} in {s:?}"))))
                .collect()
        })
        .collect()
}

/// Parses `start:stop[:step]` (inclusive) or `a,b,c`.
pub fn parse_radii(s: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Usage(format!("bad radii {s:?}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
    let radii: Vec<f64> = if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(num).collect::<Result<_, _>>()?;
        let (a, b, h) = match parts[..] {
            [a, b] => (a, b, 1.0),
            [a, b, h] => (a, b, h),
            _ => return Err(bad()),
        };
        if !(h > 0.0) || b < a {
            return Err(bad());
        }
        let steps = ((b - a) / h + 1e-9).floor() as usize;
        (0..=steps).map(|i| a + i as f64 * h).collect()
    } else {
        s.split(',').map(num).collect::<Result<_, _>>()?
    };
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(bad());
    }
    Ok(radii)
}

fn space(m: Model) -> SymmetricSpaceModel {
    match m {
        Model::Euclidean => SymmetricSpaceModel::Euclidean(2),
        Model::Hyperbolic => SymmetricSpaceModel::HyperbolicPlane,
    }
}

/// The group element carrying the basepoint to `p`.
fn element(m: Model, p: &[f64]) -> Result<GroupElement, Failure> {
    match m {
        Model::Euclidean => Ok(GroupElement::translation(p)),
        Model::Hyperbolic => {
            if p.len() != 2 {
                return usage("hyperbolic points need two coordinates");
            }
            if !(p[1] > 0.0) {
                return Err(Error::HyperbolicDomain(p[1]).into());
            }
            Ok(GroupElement::Hyperbolic(Sl2::translation_to(Complex64::new(p[0], p[1]))))
        }
    }
}

fn area_cocycle(m: Model, order: usize) -> Result<GroupCochain, Failure> {
    let (form, q) = match m {
        Model::Euclidean => (InvariantForm::euclidean_volume(2), QuadratureRule::new(2, 1)?),
        Model::Hyperbolic => (InvariantForm::hyperbolic_area(), QuadratureRule::new(2, order)?),
    };
    Ok(j_map(&form, space(m), &q)?)
}

/// Signed hyperbolic area `pi - (A + B + C)`, oriented in the Klein model.
pub fn angle_defect(z: [Complex64; 3]) -> f64 {
    let d = |a: Complex64, b: Complex64| (1.0 + (a - b).norm_sqr() / (2.0 * a.im * b.im)).acosh();
    let (a, b, c) = (d(z[1], z[2]), d(z[0], z[2]), d(z[0], z[1]));
    let angle = |opp: f64, s1: f64, s2: f64| {
        let cos = (s1.cosh() * s2.cosh() - opp.cosh()) / (s1.sinh() * s2.sinh());
        cos.clamp(-1.0, 1.0).acos()
    };
    let total = angle(a, b, c) + angle(b, a, c) + angle(c, a, b);
    let klein = |w: Complex64| {
        let p = (w - Complex64::i()) / (w + Complex64::i());
        p * (2.0 / (1.0 + p.norm_sqr()))
    };
    let k: Vec<Complex64> = z.iter().map(|&w| klein(w)).collect();
    let cross = ((k[1] - k[0]).conj() * (k[2] - k[0])).im;
    if total.is_nan() {
        return 0.0;
    }
    cross.signum() * (PI - total)
}

/// Signed Euclidean volume `det(v1 - v0, ..., vn - v0) / n!`.
fn signed_volume(v: &[Vec<f64>]) -> f64 {
    let n = v.len() - 1;
    let m = DMatrix::from_fn(n, n, |i, j| v[j + 1][i] - v[0][i]);
    m.determinant() / (1..=n).product::<usize>() as f64
}

pub fn simplex_volume_run(a: &SimplexVolumeArgs) -> Run {
    nonzero("order", a.order)?;
    positive("tol", a.tol)?;
    let pts = parse_points(&a.vertices)?;
    let (model, oracle) = match a.model {
        Model::Euclidean => {
            let n = pts[0].len();
            if pts.iter().any(|p| p.len() != n) || pts.len() != n + 1 || n == 0 || n > 4 {
                return usage(format!("a Euclidean simplex in R^n needs n + 1 vertices of length n (n <= 4), got {}", pts.len()));
            }
            (SymmetricSpaceModel::Euclidean(n), signed_volume(&pts).abs())
        }
        Model::Hyperbolic => {
            if pts.len() != 3 {
                return usage("a hyperbolic triangle needs three vertices");
            }
            for p in &pts {
                element(a.model, p)?;
            }
            let z: Vec<Complex64> = pts.iter().map(|p| Complex64::new(p[0], p[1])).collect();
            (SymmetricSpaceModel::HyperbolicPlane, angle_defect([z[0], z[1], z[2]]).abs())
        }
    };
    let vertices = pts.iter().map(|p| element(a.model, p)).collect::<Result<Vec<_>, _>>()?;
    let simplex = GeodesicSimplex::new(model, vertices)?;
    let mut r = Report::new("simplex-volume", a);
    r.tolerance("volume", a.tol);
    r.columns(&["order", "volume", "error"]);
    let mut last = f64::NAN;
    for order in 1..=a.order {
        last = simplex_volume(&simplex, &QuadratureRule::new(model.dim(), order)?)?;
        r.row(vec![order.into(), last.into(), (last - oracle).abs().into()]);
    }
    r.output("volume", last);
    r.output("oracle", oracle);
    r.check_le("volume_vs_oracle", (last - oracle).abs(), a.tol);
    Ok(r)
}

pub fn cocycle_eval_run(a: &CocycleEvalArgs) -> Run {
    nonzero("order", a.order)?;
    positive("tol", a.tol)?;
    let pts = parse_points(&a.points)?;
    if pts.len() != 3 || pts.iter().any(|p| p.len() != 2) {
        return usage("--points needs three planar points");
    }
    let g = pts.iter().map(|p| element(a.model, p)).collect::<Result<Vec<_>, _>>()?;
    let value = area_cocycle(a.model, a.order)?.evaluate(&g)?;
    let oracle = match a.model {
        Model::Euclidean => signed_volume(&pts),
        Model::Hyperbolic => {
            let z: Vec<Complex64> = pts.iter().map(|p| Complex64::new(p[0], p[1])).collect();
            angle_defect([z[0], z[1], z[2]])
        }
    };
    let mut r = Report::new("cocycle-eval", a);
    r.tolerance("oracle_gap", a.tol);
    r.output("value", value);
    r.output("oracle", oracle);
    r.columns(&["value", "oracle", "error"]);
    r.row(vec![value.into(), oracle.into(), (value - oracle).abs().into()]);
    r.check_le("value_vs_oracle", (value - oracle).abs(), a.tol);
    if a.model == Model::Hyperbolic {
        r.check_lt("abs_below_pi", value.abs(), PI);
    }
    Ok(r)
}

pub fn cocycle_check_run(a: &CocycleCheckArgs) -> Run {
    nonzero("samples", a.samples)?;
    nonzero("order", a.order)?;
    positive("radius", a.radius)?;
    let tol = a.tol.unwrap_or(if a.model == Model::Euclidean { 1e-9 } else { 1e-6 });
    positive("tol", tol)?;
    let m = space(a.model);
    let dj = delta(&area_cocycle(a.model, a.order)?);
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut r = Report::new("cocycle-check", a);
    r.tolerance("delta", tol);
    r.columns(&["sample", "abs_delta"]);
    let mut worst: f64 = 0.0;
    for i in 0..a.samples {
        let g: Vec<GroupElement> = (0..4)
            .map(|_| match a.model {
                Model::Euclidean => GroupElement::translation(&[rng.gen_range(-a.radius..a.radius), rng.gen_range(-a.radius..a.radius)]),
                Model::Hyperbolic => m.sample_ball(a.radius, &mut rng),
            })
            .collect();
        let v = dj.evaluate(&g)?.abs();
        worst = worst.max(v);
        r.row(vec![i.into(), v.into()]);
    }
    r.output("max_abs_delta", worst);
    r.check_le("max_abs_delta", worst, tol);
    Ok(r)
}

pub fn growth_profile_run(a: &GrowthProfileArgs) -> Run {
    if a.degree != 2 {
        return usage(format!("only the degree 2 area cocycle is available, got degree {}", a.degree));
    }
    nonzero("order", a.order)?;
    positive("max-exponent", a.max_exponent)?;
    let radii = parse_radii(&a.radii)?;
    let samples = a.samples.unwrap_or(if a.model == Model::Hyperbolic { 10 } else { 200 });
    nonzero("samples", samples)?;
    let g = growth_profile(&area_cocycle(a.model, a.order)?, &radii, samples, a.seed)?;
    let mut r = Report::new("growth-profile", a);
    r.columns(&["radius", "max_abs", "ratio"]);
    for i in 0..radii.len() {
        r.row(vec![g.radii[i].into(), g.max_abs[i].into(), g.ratios[i].into()]);
    }
    let last = *g.ratios.last().unwrap();
    r.output("exponent", g.exponent);
    r.output("median_ratio", g.median_ratio());
    r.output("last_ratio", last);
    match a.model {
        Model::Hyperbolic => {
            r.tolerance("last_over_median", 2.0);
            let top = g.max_abs.iter().fold(0.0f64, |m, x| m.max(*x));
            r.check_le("max_abs_at_most_pi", top, PI);
            r.check_le("last_over_median", last / g.median_ratio(), 2.0);
        }
        Model::Euclidean => {
            r.tolerance("max_exponent", a.max_exponent);
            r.check_le("fitted_exponent", g.exponent, a.max_exponent);
        }
    }
    Ok(r)
}

pub fn vanest_run(a: &VanestArgs) -> Run {
    nonzero("points", a.points)?;
    positive("spacing", a.spacing)?;
    positive("eps", a.eps)?;
    positive("tol", a.tol)?;
    let action = ProperActionData::new(2, a.spacing, Slice::point())?;
    let chi = cutoff_family(a.eps, &action)?;
    let c = area_cocycle(Model::Euclidean, 1)?;
    let frame = [TangentVector::euclidean(&[1.0, 0.0]), TangentVector::euclidean(&[0.0, 1.0])];
    let opts = VanEstOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut r = Report::new("vanest-roundtrip", a);
    r.tolerance("round_trip", a.tol);
    r.columns(&["x", "y", "value", "error"]);
    let mut worst: f64 = 0.0;
    for i in 0..a.points {
        let x = if i == 0 { [0.0, 0.0] } else { [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)] };
        let v = vanest_form(&c, &chi, &x, 0, &frame, &opts)?;
        worst = worst.max((v - 1.0).abs());
        r.row(vec![x[0].into(), x[1].into(), v.into(), (v - 1.0).abs().into()]);
    }
    r.output("max_error", worst);
    r.check_le("round_trip_error", worst, a.tol);
    Ok(r)
}

fn near(l: LatticeGroup, sites: usize, rng: &mut ChaCha8Rng) -> Result<ConvElement, Failure> {
    let mut f = ConvElement::zero(l);
    for _ in 0..sites {
        let m: Vec<i64> = (0..l.dim()).map(|_| rng.gen_range(-2..=2)).collect();
        f.set(&m, f.get(&m) + rng.gen_range(-1.0..1.0))?;
    }
    Ok(f)
}

pub fn conv_pairing_run(a: &ConvPairingArgs) -> Run {
    nonzero("trials", a.trials)?;
    nonzero("sites", a.sites)?;
    positive("spacing", a.spacing)?;
    positive("tol", a.tol)?;
    let l = LatticeGroup::new(2, a.spacing, a.radius)?;
    let model = SymmetricSpaceModel::Euclidean(2);
    let trace = tau_g_cochain(&GroupCochain::constant(0, model, 1.0), l);
    let area = tau_g_cochain(&cyclic_symmetrize(&area_cocycle(Model::Euclidean, 1)?), l);
    let zero = Idempotent::from_elems(Arc::new(l), 1, vec![ConvElement::zero(l)])?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut r = Report::new("conv-pairing", a);
    r.tolerance("pairing", a.tol);
    r.columns(&["trial", "degree0", "area"]);
    let (mut int_gap, mut area_max): (f64, f64) = (0.0, 0.0);
    for i in 0..a.trials {
        let e = elementary_idempotent(&near(l, a.sites, &mut rng)?, &near(l, a.sites, &mut rng)?)?;
        let v0 = chern_pairing(&e, &zero, &trace)?;
        let v2 = chern_pairing(&e, &zero, &area)?;
        int_gap = int_gap.max((v0 - 1.0).abs());
        area_max = area_max.max(v2.abs());
        r.row(vec![i.into(), v0.into(), v2.into()]);
    }
    r.output("max_rank_gap", int_gap);
    r.output("max_abs_area", area_max);
    r.check_le("degree0_equals_rank", int_gap, a.tol);
    r.check_le("area_pairing_vanishes", area_max, a.tol);
    Ok(r)
}

fn gaussian(l: LatticeGroup, rng: &mut ChaCha8Rng) -> ConvElement {
    let mu = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
    let s = rng.gen_range(0.7..1.2);
    let tilt = [rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)];
    ConvElement::from_fn(l, |x| {
        let r2 = (x[0] - mu[0]).powi(2) + (x[1] - mu[1]).powi(2);
        (1.0 + tilt[0] * x[0] + tilt[1] * x[1]) * (-r2 / (2.0 * s * s)).exp()
    })
}

pub fn fourier_run(a: &FourierArgs) -> Run {
    nonzero("trios", a.trios)?;
    positive("spacing", a.spacing)?;
    positive("tol", a.tol)?;
    let l = LatticeGroup::new(2, a.spacing, a.radius)?;
    let c = cyclic_symmetrize(&area_cocycle(Model::Euclidean, 1)?);
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut r = Report::new("fourier-check", a);
    r.tolerance("relative_gap", a.tol);
    r.columns(&["trio", "lattice", "spectral", "relative_gap"]);
    let mut worst: f64 = 0.0;
    for i in 0..a.trios {
        let trio = [gaussian(l, &mut rng), gaussian(l, &mut rng), gaussian(l, &mut rng)];
        let (lat, spec) = fourier_check(&c, &trio)?;
        let rel = (lat - spec).abs() / lat.abs().max(spec.abs()).max(f64::MIN_POSITIVE);
        worst = worst.max(rel);
        r.row(vec![i.into(), lat.into(), spec.into(), rel.into()]);
    }
    r.output("max_relative_gap", worst);
    r.check_le("max_relative_gap", worst, a.tol);
    Ok(r)
}

pub fn morita_run(a: &MoritaArgs) -> Run {
    nonzero("slice", a.slice)?;
    nonzero("rank", a.rank)?;
    nonzero("sites", a.sites)?;
    positive("spacing", a.spacing)?;
    positive("tol", a.tol)?;
    if a.n == 0 || a.n > 4 {
        return usage("--n must be between 1 and 4");
    }
    if a.rank > a.slice {
        return usage("--rank cannot exceed --slice");
    }
    if a.cocycle != MoritaCocycle::Constant && a.n != 2 {
        return usage("the area and inhomogeneous cocycles live on R^2; use --n 2");
    }
    let model = SymmetricSpaceModel::Euclidean(a.n);
    let c = match a.cocycle {
        MoritaCocycle::Constant => GroupCochain::constant(0, model, 1.0),
        MoritaCocycle::Area => cyclic_symmetrize(&area_cocycle(Model::Euclidean, 1)?),
        MoritaCocycle::Inhomogeneous => cyclic_symmetrize(&GroupCochain::new(2, model, false, |g: &[GroupElement]| {
            let p: Vec<&[f64]> = g.iter().map(|x| x.as_translation().unwrap()).collect();
            (p[1][0] - 0.3 * p[0][1]).cos() * (1.0 + p[2][0] * p[1][1]) + p[2][1].powi(3) * p[0][0]
        })),
    };
    let l = LatticeGroup::new(a.n, a.spacing, a.radius)?;
    let action = ProperActionData::new(a.n, a.spacing, Slice::circle(a.slice, 2.0)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let e1 = elementary_idempotent(&near(l, a.sites, &mut rng)?, &near(l, a.sites, &mut rng)?)?;
    let vecs: Vec<Vec<f64>> = (0..a.rank).map(|_| (0..a.slice).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let e2 = slice_projection(action.slice(), &vecs)?;
    let (lhs, rhs) = morita_check(&e1, &e2, &c, &slice_cutoff(&action))?;
    let gap = (lhs - rhs).abs();
    let mut r = Report::new("morita-check", a);
    r.tolerance("morita_gap", a.tol);
    r.output("kernel_pairing", lhs);
    r.output("group_pairing", rhs);
    r.output("gap", gap);
    r.columns(&["kernel_pairing", "group_pairing", "gap"]);
    r.row(vec![lhs.into(), rhs.into(), gap.into()]);
    r.check_le("morita_gap", gap, a.tol * (1.0 + rhs.abs()));
    Ok(r)
}

pub fn fredholm_run(a: &FredholmArgs) -> Run {
    nonzero("p", a.p)?;
    nonzero("q", a.q)?;
    positive("tol", a.tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let d = match a.rank {
        None => GradedDirac::random(a.p, a.q, &mut rng),
        Some(k) if k <= a.p.min(a.q) => GradedDirac::random_low_rank(a.p, a.q, k, &mut rng),
        Some(k) => return usage(format!("--rank {k} exceeds min(p, q)")),
    };
    let oracle = d.index();
    let (ker_plus, ker_minus) = d.kernel_dims();
    let mut r = Report::new("fredholm-demo", a);
    r.tolerance("projector_defect", PROJECTOR_TOL);
    r.tolerance("rank_cutoff", RANK_TOL);
    r.tolerance("supertrace_drift", a.tol);
    r.output("index_oracle", oracle);
    r.output("kernel_dims", [ker_plus, ker_minus]);
    r.columns(&["projector", "defect", "pairing"]);
    let projectors = [
        ("connes-skandalis", cs_projector(&d, None)?),
        ("connes-moscovici", cm_idempotent(&d)?),
        ("graph", graph_projection(&d)?),
        ("moscovici-wu", mw_projector(&d, None)?),
    ];
    let mut pairings = serde_json::Map::new();
    for (name, pr) in &projectors {
        let v = trace_pairing(pr)?;
        r.row(vec![Cell::from(*name), pr.defect().into(), v.into()]);
        pairings.insert(name.to_string(), v.round().into());
        r.check_le(&format!("{name}_matches_oracle"), (v.round() - oracle as f64).abs(), 0.0);
    }
    r.output("pairings", pairings);
    let drift = [0.1, 1.0, 10.0]
        .iter()
        .map(|&t| (mckean_singer(&d, t) - oracle as f64).abs())
        .fold(0.0f64, f64::max);
    r.output("supertrace_drift", drift);
    r.check_le("supertrace_drift", drift, a.tol);
    Ok(r)
}

pub fn index_rhs_run(a: &IndexRhsArgs) -> Run {
    positive("spacing", a.spacing)?;
    positive("eps", a.eps)?;
    positive("tol", a.tol)?;
    if !a.field.is_finite() {
        return usage("--field must be finite");
    }
    let (value, expected) = match a.case {
        IndexCase::Flat | IndexCase::Magnetic => {
            let action = ProperActionData::new(2, a.spacing, Slice::point())?;
            let chi = cutoff_family(a.eps, &action)?;
            if a.case == IndexCase::Flat {
                let area = CharacteristicForm::pullback(&InvariantForm::euclidean_volume(2), 2, 2)?;
                (higher_index_rhs(&atiyah_singer_form(&CurvatureData::flat(2, 2, 1)?), &chi, &area)?, 1.0)
            } else {
                let one = CharacteristicForm::pullback(&InvariantForm::euclidean_basis(2, &[]), 2, 2)?;
                let curv = CurvatureData::magnetic(2, 2, a.field)?;
                (higher_index_rhs(&atiyah_singer_form(&curv), &chi, &one)?, a.field / (2.0 * PI))
            }
        }
        IndexCase::Exact => {
            let cyl = ProperActionData::new(1, a.spacing, Slice::circle(64, 2.0 * PI)?)?;
            let beta = CharacteristicForm::from_fn(2, vec![1], |x| {
                ExtForm::monomial(2, &[0], x[1].sin() + 0.3 * (2.0 * x[1]).cos())
            });
            let exact = beta.exterior_derivative(1e-4);
            let l = l_form(&CurvatureData::flat(1, 2, 1)?);
            (higher_signature(&l, &cutoff_family(a.eps, &cyl)?, &exact)?, 0.0)
        }
    };
    let case = match a.case {
        IndexCase::Flat => "flat",
        IndexCase::Magnetic => "magnetic",
        IndexCase::Exact => "exact",
    };
    let mut r = Report::new("index-rhs", a);
    r.tolerance("rhs", a.tol);
    r.output("value", value);
    r.output("expected", expected);
    r.output("volume_normalization", "lattice sum of chi over one orbit equals 1");
    r.columns(&["case", "value", "expected", "error"]);
    r.row(vec![case.into(), value.into(), expected.into(), (value - expected).abs().into()]);
    r.check_le("rhs_error", (value - expected).abs(), a.tol);
    Ok(r)
}

pub fn run(cmd: &Command) -> Run {
    match cmd {
        Command::SimplexVolume(a) => simplex_volume_run(a),
        Command::CocycleEval(a) => cocycle_eval_run(a),
        Command::CocycleCheck(a) => cocycle_check_run(a),
        Command::GrowthProfile(a) => growth_profile_run(a),
        Command::VanestRoundtrip(a) => vanest_run(a),
        Command::ConvPairing(a) => conv_pairing_run(a),
        Command::FourierCheck(a) => fourier_run(a),
        Command::MoritaCheck(a) => morita_run(a),
        Command::FredholmDemo(a) => fredholm_run(a),
        Command::IndexRhs(a) => index_rhs_run(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radii_ranges_and_lists() {
        assert_eq!(parse_radii("1:4").unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(parse_radii("1:2:0.5").unwrap(), vec![1.0, 1.5, 2.0]);
        assert_eq!(parse_radii("2,5").unwrap(), vec![2.0, 5.0]);
        assert!(parse_radii("3:1").is_err());
        assert!(parse_radii("0,1").is_err());
        assert!(parse_radii("a").is_err());
    }

    #[test]
    fn points_parse() {
        assert_eq!(parse_points("0,1;2.5,-1").unwrap(), vec![vec![0.0, 1.0], vec![2.5, -1.0]]);
        assert!(parse_points("0,x").is_err());
    }

    #[test]
    fn angle_defect_orientation_and_scale() {
        let h = 1e-3;
        let z = [Complex64::new(0.0, 1.0), Complex64::new(h, 1.0), Complex64::new(0.0, 1.0 + h)];
        let a = angle_defect(z);
        assert!((a - h * h / 2.0).abs() < 1e-2 * h * h, "{a}");
        let big = [Complex64::new(-20.0, 0.05), Complex64::new(20.0, 0.05), Complex64::new(0.0, 50.0)];
        let b = angle_defect(big);
        assert!(b > 0.0 && b < PI);
        assert!((angle_defect([big[1], big[0], big[2]]) + b).abs() < 1e-12);
    }

    #[test]
    fn error_classes() {
        assert_eq!(Failure::Usage("x".into()).exit_code(), 2);
        assert_eq!(Failure::Numeric(Error::HyperbolicDomain(-1.0)).exit_code(), 3);
        assert_eq!(Failure::Numeric(Error::InvalidArgument("x".into())).exit_code(), 2);
    }
}

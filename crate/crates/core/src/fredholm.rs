//! Finite graded Dirac models and the Connes-Skandalis, Connes-Moscovici,
//! graph and Moscovici-Wu index idempotents.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Idempotency tolerance for index projectors, entrywise.
pub const PROJECTOR_TOL: f64 = 1e-9;
/// Integrality tolerance of the trace pairing.
pub const INTEGRALITY_TOL: f64 = 1e-8;
/// Singular values below this count as zero.
pub const RANK_TOL: f64 = 1e-10;

/// `D = offdiag(D^-, D^+)` on `E^+ (+) E^-` with `dim E^+ = p`, `dim E^- = q`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedDirac {
    dplus: DMatrix<f64>,
}

impl GradedDirac {
    /// `D^+` is `q x p`.
    pub fn new(dplus: DMatrix<f64>) -> Result<Self> {
        if dplus.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("D^+ has non-finite entries".into()));
        }
        Ok(Self { dplus })
    }

    pub fn zero(p: usize, q: usize) -> Self {
        Self { dplus: DMatrix::zeros(q, p) }
    }

    /// Standard normal entries.
    pub fn random<R: Rng + ?Sized>(p: usize, q: usize, rng: &mut R) -> Self {
        Self { dplus: DMatrix::from_fn(q, p, |_, _| rng.sample(StandardNormal)) }
    }

    /// Rank at most `r`, as a product of normal `q x r` and `r x p` factors.
    pub fn random_low_rank<R: Rng + ?Sized>(p: usize, q: usize, r: usize, rng: &mut R) -> Self {
        let a = DMatrix::from_fn(q, r, |_, _| rng.sample::<f64, _>(StandardNormal));
        let b = DMatrix::from_fn(r, p, |_, _| rng.sample::<f64, _>(StandardNormal));
        Self { dplus: a * b }
    }

    pub fn p(&self) -> usize {
        self.dplus.ncols()
    }

    pub fn q(&self) -> usize {
        self.dplus.nrows()
    }

    pub fn d_plus(&self) -> &DMatrix<f64> {
        &self.dplus
    }

    pub fn d_minus(&self) -> DMatrix<f64> {
        self.dplus.transpose()
    }

    /// The full odd operator on `E^+ (+) E^-`.
    pub fn operator(&self) -> DMatrix<f64> {
        let (p, q) = (self.p(), self.q());
        let mut d = DMatrix::zeros(p + q, p + q);
        d.view_mut((0, p), (p, q)).copy_from(&self.d_minus());
        d.view_mut((p, 0), (q, p)).copy_from(&self.dplus);
        d
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dplus: &self.dplus * s }
    }

    /// `(dim ker D^+, dim ker D^-)` from the singular values.
    pub fn kernel_dims(&self) -> (usize, usize) {
        let rank = if self.dplus.is_empty() {
            0
        } else {
            self.dplus.singular_values().iter().filter(|&&s| s >= RANK_TOL).count()
        };
        (self.p() - rank, self.q() - rank)
    }

    /// `dim ker D^+ - dim ker D^-`.
    pub fn index(&self) -> i64 {
        let (a, b) = self.kernel_dims();
        a as i64 - b as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectorKind {
    ConnesSkandalis,
    ConnesMoscovici,
    Graph,
    MoscoviciWu,
}

/// An idempotent of size `p + q` together with the reference `e_1 = diag(0, I_q)`.
#[derive(Clone, Debug)]
pub struct IndexProjector {
    matrix: DMatrix<f64>,
    kind: ProjectorKind,
    e1: DMatrix<f64>,
}

impl IndexProjector {
    fn new(matrix: DMatrix<f64>, kind: ProjectorKind, p: usize, q: usize) -> Result<Self> {
        let mut e1 = DMatrix::zeros(p + q, p + q);
        for i in p..p + q {
            e1[(i, i)] = 1.0;
        }
        let out = Self { matrix, kind, e1 };
        let d = out.defect();
        if !(d <= PROJECTOR_TOL) {
            return Err(Error::NotIdempotent(d));
        }
        Ok(out)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn kind(&self) -> ProjectorKind {
        self.kind
    }

    pub fn reference(&self) -> &DMatrix<f64> {
        &self.e1
    }

    /// `max |P^2 - P|`.
    pub fn defect(&self) -> f64 {
        (&self.matrix * &self.matrix - &self.matrix).amax()
    }
}

/// `f(A)` for symmetric `A`.
fn sym_fn(a: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    if a.is_empty() {
        return a.clone();
    }
    let e = SymmetricEigen::new(a.clone());
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(f));
    &e.eigenvectors * d * e.eigenvectors.transpose()
}

/// `(1 - e^{-x}) / x`, entire.
pub fn phi(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        1.0 - x / 2.0 + x * x / 6.0
    } else {
        -(-x).exp_m1() / x
    }
}

/// The block matrix `(S+^2, S+(I + S+)Q; S- D^+, I - S-^2)`.
fn parametrix_projector(d: &GradedDirac, qm: &DMatrix<f64>, kind: ProjectorKind) -> Result<IndexProjector> {
    let (p, q) = (d.p(), d.q());
    if qm.nrows() != p || qm.ncols() != q {
        return Err(Error::InvalidArgument(format!("parametrix must be {p} x {q}")));
    }
    let dp = d.d_plus();
    let sp = DMatrix::identity(p, p) - qm * dp;
    let sm = DMatrix::identity(q, q) - dp * qm;
    let mut m = DMatrix::zeros(p + q, p + q);
    m.view_mut((0, 0), (p, p)).copy_from(&(&sp * &sp));
    m.view_mut((0, p), (p, q)).copy_from(&(&sp * (DMatrix::identity(p, p) + &sp) * qm));
    m.view_mut((p, 0), (q, p)).copy_from(&(&sm * dp));
    m.view_mut((p, p), (q, q)).copy_from(&(DMatrix::identity(q, q) - &sm * &sm));
    IndexProjector::new(m, kind, p, q)
}

/// Moore-Penrose pseudoinverse of `D^+`, singular values below [`RANK_TOL`] dropped.
pub fn pseudo_parametrix(d: &GradedDirac) -> DMatrix<f64> {
    if d.d_plus().is_empty() {
        return DMatrix::zeros(d.p(), d.q());
    }
    d.d_plus().clone().pseudo_inverse(RANK_TOL).expect("tolerance is nonnegative")
}

/// Connes-Skandalis idempotent for the parametrix `q`, or the pseudoinverse.
pub fn cs_projector(d: &GradedDirac, q: Option<&DMatrix<f64>>) -> Result<IndexProjector> {
    let qm = match q {
        Some(m) => m.clone(),
        None => pseudo_parametrix(d),
    };
    parametrix_projector(d, &qm, ProjectorKind::ConnesSkandalis)
}

/// `V_D`, built from the heat parametrix.
pub fn cm_idempotent(d: &GradedDirac) -> Result<IndexProjector> {
    let (p, q) = (d.p(), d.q());
    let dp = d.d_plus();
    let dm = d.d_minus();
    let a = &dm * dp;
    let b = dp * &dm;
    let mut m = DMatrix::zeros(p + q, p + q);
    m.view_mut((0, 0), (p, p)).copy_from(&sym_fn(&a, |x| (-x).exp()));
    m.view_mut((0, p), (p, q)).copy_from(&(sym_fn(&a, |x| (-0.5 * x).exp() * phi(x)) * &dm));
    m.view_mut((p, 0), (q, p)).copy_from(&(sym_fn(&b, |x| (-0.5 * x).exp()) * dp));
    m.view_mut((p, p), (q, q)).copy_from(&sym_fn(&b, |x| -(-x).exp_m1()));
    IndexProjector::new(m, ProjectorKind::ConnesMoscovici, p, q)
}

/// The graph projection `e_D`.
pub fn graph_projection(d: &GradedDirac) -> Result<IndexProjector> {
    let (p, q) = (d.p(), d.q());
    let dp = d.d_plus();
    let dm = d.d_minus();
    let r = sym_fn(&(&dm * dp), |x| 1.0 / (1.0 + x));
    let mut m = DMatrix::zeros(p + q, p + q);
    m.view_mut((0, 0), (p, p)).copy_from(&r);
    m.view_mut((0, p), (p, q)).copy_from(&(&r * &dm));
    m.view_mut((p, 0), (q, p)).copy_from(&(dp * &r));
    m.view_mut((p, p), (q, q)).copy_from(&(dp * &r * &dm));
    IndexProjector::new(m, ProjectorKind::Graph, p, q)
}

/// The Moscovici-Wu projector with parametrix `ubar(D^- D^+) D^-`.
pub fn mw_projector(d: &GradedDirac, ubar: Option<&dyn Fn(f64) -> f64>) -> Result<IndexProjector> {
    let a = &d.d_minus() * d.d_plus();
    let pm = match ubar {
        Some(f) => sym_fn(&a, f),
        None => sym_fn(&a, phi),
    } * d.d_minus();
    parametrix_projector(d, &pm, ProjectorKind::MoscoviciWu)
}

/// `Tr P - Tr e_1`, checked to be an integer within [`INTEGRALITY_TOL`].
pub fn trace_pairing(p: &IndexProjector) -> Result<f64> {
    let d = p.defect();
    if !(d <= PROJECTOR_TOL) {
        return Err(Error::NotIdempotent(d));
    }
    let v = p.matrix.trace() - p.e1.trace();
    if (v - v.round()).abs() > INTEGRALITY_TOL {
        return Err(Error::NonIntegralPairing(v));
    }
    Ok(v)
}

/// `Tr e^{-t D^- D^+} - Tr e^{-t D^+ D^-}`.
pub fn mckean_singer(d: &GradedDirac, t: f64) -> f64 {
    let dp = d.d_plus();
    let dm = d.d_minus();
    let tr = |m: DMatrix<f64>| -> f64 {
        if m.is_empty() {
            0.0
        } else {
            SymmetricEigen::new(m).eigenvalues.iter().map(|l| (-t * l).exp()).sum()
        }
    };
    tr(&dm * dp) - tr(dp * &dm)
}

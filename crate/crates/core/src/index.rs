//! Characteristic forms on the product models `M = R^n x S` and the
//! right-hand side of the higher index formula.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{InvariantForm, Point, TangentVector};
use crate::proper::Cutoff;

/// Largest manifold dimension handled by the characteristic series.
pub const MAX_DIM: usize = 4;

/// A form on `R^d` at one point, coefficients indexed by the bitmask of
/// `dx_{i_1} ^ .. ^ dx_{i_k}` with increasing indices.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtForm {
    dim: usize,
    coeffs: Vec<f64>,
}

fn wedge_sign(a: usize, b: usize) -> f64 {
    let mut inversions = 0;
    let mut bits = b;
    while bits != 0 {
        let j = bits.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        bits &= bits - 1;
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl ExtForm {
    pub fn zero(dim: usize) -> Self {
        Self { dim, coeffs: vec![0.0; 1 << dim] }
    }

    pub fn scalar(dim: usize, v: f64) -> Self {
        let mut f = Self::zero(dim);
        f.coeffs[0] = v;
        f
    }

    /// `v dx_{i_1} ^ .. ^ dx_{i_k}`; repeated indices give zero.
    pub fn monomial(dim: usize, indices: &[usize], v: f64) -> Self {
        let mut f = Self::zero(dim);
        let mut mask = 0usize;
        let mut sign = 1.0;
        for &i in indices {
            assert!(i < dim, "index {i} out of range");
            if mask & (1 << i) != 0 {
                return f;
            }
            sign *= wedge_sign(mask, 1 << i);
            mask |= 1 << i;
        }
        f.coeffs[mask] = sign * v;
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `dx_1 ^ .. ^ dx_d`.
    pub fn top(&self) -> f64 {
        self.coeffs[(1 << self.dim) - 1]
    }

    /// The degree-`k` piece.
    pub fn part(&self, k: usize) -> Self {
        let mut f = Self::zero(self.dim);
        for (m, c) in self.coeffs.iter().enumerate() {
            if m.count_ones() as usize == k {
                f.coeffs[m] = *c;
            }
        }
        f
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim);
        Self { dim: self.dim, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn wedge(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim);
        let mut f = Self::zero(self.dim);
        for (a, x) in self.coeffs.iter().enumerate() {
            if *x == 0.0 {
                continue;
            }
            for (b, y) in o.coeffs.iter().enumerate() {
                if *y != 0.0 && a & b == 0 {
                    f.coeffs[a | b] += wedge_sign(a, b) * x * y;
                }
            }
        }
        f
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// A matrix-valued form at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct MatForm {
    dim: usize,
    rank: usize,
    coeffs: Vec<DMatrix<Complex64>>,
}

impl MatForm {
    pub fn zero(dim: usize, rank: usize) -> Self {
        Self { dim, rank, coeffs: vec![DMatrix::zeros(rank, rank); 1 << dim] }
    }

    /// `sum_{i<j} blocks[(i, j)] dx_i ^ dx_j`.
    pub fn two_form(dim: usize, rank: usize, blocks: &[((usize, usize), DMatrix<Complex64>)]) -> Self {
        let mut f = Self::zero(dim, rank);
        for ((i, j), b) in blocks {
            assert!(i < j && *j < dim, "need i < j < dim");
            f.coeffs[(1 << i) | (1 << j)] += b;
        }
        f
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let mut f = Self::zero(self.dim, self.rank);
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.iter().all(|v| *v == Complex64::new(0.0, 0.0)) {
                continue;
            }
            for (b, y) in o.coeffs.iter().enumerate() {
                if a & b == 0 {
                    f.coeffs[a | b] += (x * y) * Complex64::new(wedge_sign(a, b), 0.0);
                }
            }
        }
        f
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { dim: self.dim, rank: self.rank, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Real part of the fibrewise trace.
    pub fn trace(&self) -> ExtForm {
        ExtForm { dim: self.dim, coeffs: self.coeffs.iter().map(|c| c.trace().re).collect() }
    }

    /// Largest imaginary part of the fibrewise trace.
    pub fn trace_imag(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.trace().im.abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().flat_map(|c| c.iter()).fold(0.0, |m, v| m.max(v.norm()))
    }
}

fn cmax(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.norm()))
}

type CurvatureFn = dyn Fn(&[f64]) -> MatForm + Send + Sync;

/// Curvature of an invariant metric on `M` and of a Hermitian bundle over it.
#[derive(Clone)]
pub struct CurvatureData {
    group_dim: usize,
    dim: usize,
    riemann: Arc<CurvatureFn>,
    bundle: Arc<CurvatureFn>,
}

impl fmt::Debug for CurvatureData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurvatureData").field("group_dim", &self.group_dim).field("dim", &self.dim).finish()
    }
}

impl CurvatureData {
    /// Flat metric and trivial flat bundle of rank `rank` on `R^n x S`, `dim M = d`.
    pub fn flat(group_dim: usize, dim: usize, rank: usize) -> Result<Self> {
        if dim > MAX_DIM || group_dim > dim || group_dim == 0 {
            return Err(Error::InvalidArgument(format!("need 1 <= n <= d <= {MAX_DIM}, got n = {group_dim}, d = {dim}")));
        }
        Ok(Self {
            group_dim,
            dim,
            riemann: Arc::new(move |_| MatForm::zero(dim, dim)),
            bundle: Arc::new(move |_| MatForm::zero(dim, rank)),
        })
    }

    /// Replaces the Riemannian curvature; values must be real antisymmetric.
    pub fn with_riemann<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64]) -> MatForm + Send + Sync + 'static,
    {
        self.riemann = Arc::new(f);
        self
    }

    /// Replaces the bundle curvature; values must be skew-Hermitian.
    pub fn with_bundle<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64]) -> MatForm + Send + Sync + 'static,
    {
        self.bundle = Arc::new(f);
        self
    }

    /// The line bundle with `F = -i B dx_0 ^ dx_1`.
    pub fn magnetic(group_dim: usize, dim: usize, b: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidArgument("a magnetic field needs dimension 2".into()));
        }
        let flat = Self::flat(group_dim, dim, 1)?;
        let block = DMatrix::from_element(1, 1, Complex64::new(0.0, -b));
        Ok(flat.with_bundle(move |_| MatForm::two_form(dim, 1, &[((0, 1), block.clone())])))
    }

    pub fn group_dim(&self) -> usize {
        self.group_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn riemann(&self, x: &[f64]) -> MatForm {
        (self.riemann)(x)
    }

    pub fn bundle(&self, x: &[f64]) -> MatForm {
        (self.bundle)(x)
    }

    pub fn bundle_rank(&self) -> usize {
        self.bundle(&vec![0.0; self.dim]).rank()
    }

    /// Largest change of either curvature under random translations along `G`.
    pub fn invariance_defect(&self, samples: usize, radius: f64, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let x: Vec<f64> = (0..self.dim).map(|_| rng.gen_range(-radius..radius)).collect();
            let mut y = x.clone();
            for v in y.iter_mut().take(self.group_dim) {
                *v += rng.gen_range(-radius..radius);
            }
            for (a, b) in [(self.riemann(&x), self.riemann(&y)), (self.bundle(&x), self.bundle(&y))] {
                let d = a.coeffs.iter().zip(&b.coeffs).map(|(p, q)| cmax(&(p - q))).fold(0.0, f64::max);
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest violation of antisymmetry resp. skew-Hermiticity.
    pub fn symmetry_defect(&self, x: &[f64]) -> f64 {
        let r = self.riemann(x);
        let b = self.bundle(x);
        let rd = r.coeffs.iter().map(|c| cmax(&(c + c.transpose())).max(c.map(|v| v.im).amax())).fold(0.0, f64::max);
        let bd = b.coeffs.iter().map(|c| cmax(&(c + c.adjoint()))).fold(0.0, f64::max);
        rd.max(bd)
    }
}

type FormFn = dyn Fn(&[f64]) -> ExtForm + Send + Sync;

/// A form on `M` given pointwise, with the list of degrees it may occupy.
#[derive(Clone)]
pub struct CharacteristicForm {
    dim: usize,
    degrees: Vec<usize>,
    eval: Arc<FormFn>,
}

impl fmt::Debug for CharacteristicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CharacteristicForm").field("dim", &self.dim).field("degrees", &self.degrees).finish()
    }
}

impl CharacteristicForm {
    pub fn from_fn<F>(dim: usize, degrees: Vec<usize>, f: F) -> Self
    where
        F: Fn(&[f64]) -> ExtForm + Send + Sync + 'static,
    {
        Self { dim, degrees, eval: Arc::new(f) }
    }

    pub fn constant(form: ExtForm) -> Self {
        let dim = form.dim;
        let degrees = (0..=dim).filter(|&k| form.part(k).max_abs() > 0.0).collect();
        Self::from_fn(dim, degrees, move |_| form.clone())
    }

    /// `psi^* alpha` for an invariant form on `R^n`, constant along the slice.
    pub fn pullback(alpha: &InvariantForm, group_dim: usize, dim: usize) -> Result<Self> {
        let k = alpha.degree();
        if k > group_dim || group_dim > dim {
            return Err(Error::InvalidArgument(format!("a {k}-form on R^{group_dim} cannot live on a {dim}-manifold")));
        }
        let alpha = alpha.clone();
        let masks: Vec<usize> = (0..1usize << group_dim).filter(|m| m.count_ones() as usize == k).collect();
        Ok(Self::from_fn(dim, vec![k], move |x| {
            let mut f = ExtForm::zero(dim);
            let p = Point::euclidean(&x[..group_dim]);
            for &m in &masks {
                let tangents: Vec<TangentVector> = (0..group_dim)
                    .filter(|i| m & (1 << i) != 0)
                    .map(|i| {
                        let mut e = vec![0.0; group_dim];
                        e[i] = 1.0;
                        TangentVector::euclidean(&e)
                    })
                    .collect();
                f.coeffs[m] = alpha.evaluate(&p, &tangents);
            }
            f
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn at(&self, x: &[f64]) -> ExtForm {
        (self.eval)(x)
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let (a, b) = (self.clone(), o.clone());
        let mut degrees: Vec<usize> = a
            .degrees
            .iter()
            .flat_map(|i| b.degrees.iter().map(move |j| i + j))
            .filter(|&k| k <= a.dim)
            .collect();
        degrees.sort_unstable();
        degrees.dedup();
        Self::from_fn(a.dim, degrees, move |x| a.at(x).wedge(&b.at(x)))
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = (self.clone(), o.clone());
        let mut degrees = [a.degrees.clone(), b.degrees.clone()].concat();
        degrees.sort_unstable();
        degrees.dedup();
        Self::from_fn(a.dim, degrees, move |x| a.at(x).add(&b.at(x)))
    }

    /// `d` by central differences with step `h` in every coordinate.
    pub fn exterior_derivative(&self, h: f64) -> Self {
        let a = self.clone();
        let dim = a.dim;
        let degrees = a.degrees.iter().map(|k| k + 1).filter(|&k| k <= dim).collect();
        Self::from_fn(dim, degrees, move |x| {
            let mut out = ExtForm::zero(dim);
            for i in 0..dim {
                let mut xp = x.to_vec();
                let mut xm = x.to_vec();
                xp[i] += h;
                xm[i] -= h;
                let deriv = a.at(&xp).add(&a.at(&xm).scale(-1.0)).scale(0.5 / h);
                out = out.add(&ExtForm::monomial(dim, &[i], 1.0).wedge(&deriv));
            }
            out
        })
    }

    /// Largest deviation under random translations along the first `n` coordinates.
    pub fn invariance_defect(&self, group_dim: usize, samples: usize, radius: f64, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples)
            .map(|_| {
                let x: Vec<f64> = (0..self.dim).map(|_| rng.gen_range(-radius..radius)).collect();
                let mut y = x.clone();
                for v in y.iter_mut().take(group_dim) {
                    *v += rng.gen_range(-radius..radius);
                }
                self.at(&x).add(&self.at(&y).scale(-1.0)).max_abs()
            })
            .fold(0.0, f64::max)
    }
}

fn even_degrees(dim: usize) -> Vec<usize> {
    (0..=dim).step_by(2).collect()
}

/// `p_1 = -tr(R ^ R) / 8 pi^2`.
pub fn first_pontryagin(c: &CurvatureData, x: &[f64]) -> ExtForm {
    let r = c.riemann(x);
    r.wedge(&r).trace().part(4).scale(-1.0 / (8.0 * PI * PI))
}

/// `A-hat = 1 - p_1 / 24`, truncated at degree 4.
pub fn a_hat_form(c: &CurvatureData) -> CharacteristicForm {
    let c = c.clone();
    let d = c.dim;
    CharacteristicForm::from_fn(d, even_degrees(d), move |x| ExtForm::scalar(d, 1.0).add(&first_pontryagin(&c, x).scale(-1.0 / 24.0)))
}

/// `L = 1 + p_1 / 3`, truncated at degree 4.
pub fn l_form(c: &CurvatureData) -> CharacteristicForm {
    let c = c.clone();
    let d = c.dim;
    CharacteristicForm::from_fn(d, even_degrees(d), move |x| ExtForm::scalar(d, 1.0).add(&first_pontryagin(&c, x).scale(1.0 / 3.0)))
}

/// `Ch' = rk + tr(iF / 2 pi) + tr((iF / 2 pi)^2) / 2`.
pub fn chern_character(c: &CurvatureData) -> CharacteristicForm {
    let c = c.clone();
    let d = c.dim;
    CharacteristicForm::from_fn(d, even_degrees(d), move |x| {
        let f = c.bundle(x).scale(Complex64::new(0.0, 1.0 / (2.0 * PI)));
        let rank = f.rank() as f64;
        ExtForm::scalar(d, rank).add(&f.trace().part(2)).add(&f.wedge(&f).trace().part(4).scale(0.5))
    })
}

/// `AS(M) = A-hat ^ Ch'`.
pub fn atiyah_singer_form(c: &CurvatureData) -> CharacteristicForm {
    a_hat_form(c).wedge(&chern_character(c))
}

/// `int_M chi (AS ^ alpha)_top`, with `alpha` homogeneous.
pub fn higher_index_rhs(as_form: &CharacteristicForm, chi: &Cutoff, alpha: &CharacteristicForm) -> Result<f64> {
    let a = chi.action();
    let n = a.group_dim();
    let d = n + a.slice().dim();
    if as_form.dim != d || alpha.dim != d {
        return Err(Error::InvalidArgument(format!(
            "forms live in dimension {} and {}, the model has dimension {d}",
            as_form.dim, alpha.dim
        )));
    }
    let k = match alpha.degrees.as_slice() {
        [k] => *k,
        _ => return Err(Error::InvalidArgument("alpha must be homogeneous".into())),
    };
    if k > d || !as_form.degrees.contains(&(d - k)) {
        return Err(Error::DegreeMismatch { needed: d.saturating_sub(k), top: d });
    }
    let integrand = |y: &[f64], s: &[f64]| {
        let x = [y, s].concat();
        as_form.at(&x).part(d - k).wedge(&alpha.at(&x)).top()
    };
    Ok(chi.integrate(integrand))
}

/// `int_M chi (L ^ alpha)_top`.
pub fn higher_signature(l: &CharacteristicForm, chi: &Cutoff, alpha: &CharacteristicForm) -> Result<f64> {
    higher_index_rhs(l, chi, alpha)
}

/// `int_M chi (A-hat ^ alpha)_top`.
pub fn higher_a_hat(a_hat: &CharacteristicForm, chi: &Cutoff, alpha: &CharacteristicForm) -> Result<f64> {
    higher_index_rhs(a_hat, chi, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proper::{cutoff_family, ProperActionData, Slice};

    fn real(m: DMatrix<f64>) -> DMatrix<Complex64> {
        m.map(|v| Complex64::new(v, 0.0))
    }

    fn antisym(d: usize, i: usize, j: usize, v: f64) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(d, d);
        m[(i, j)] = v;
        m[(j, i)] = -v;
        m
    }

    #[test]
    fn wedge_signs() {
        let dx = ExtForm::monomial(2, &[0], 1.0);
        let dy = ExtForm::monomial(2, &[1], 1.0);
        assert_eq!(dx.wedge(&dy).top(), 1.0);
        assert_eq!(dy.wedge(&dx).top(), -1.0);
        assert_eq!(dx.wedge(&dx).max_abs(), 0.0);
        assert_eq!(ExtForm::monomial(3, &[2, 0, 1], 1.0).top(), 1.0);
        assert_eq!(ExtForm::monomial(4, &[1, 0, 3, 2], 2.0).top(), 2.0);
    }

    #[test]
    fn flat_forms_are_trivial() {
        let c = CurvatureData::flat(2, 4, 3).unwrap();
        let x = [0.1, 0.2, 0.3, 0.4];
        assert_eq!(a_hat_form(&c).at(&x), ExtForm::scalar(4, 1.0));
        assert_eq!(l_form(&c).at(&x), ExtForm::scalar(4, 1.0));
        assert_eq!(chern_character(&c).at(&x), ExtForm::scalar(4, 3.0));
    }

    #[test]
    fn constant_block_curvature_matches_the_pontryagin_polynomial() {
        let a = antisym(4, 0, 1, 0.7) + antisym(4, 2, 3, -0.2);
        let b = antisym(4, 0, 1, 1.3) + antisym(4, 0, 2, 0.4) + antisym(4, 2, 3, 0.9);
        let (ac, bc) = (real(a.clone()), real(b.clone()));
        let c = CurvatureData::flat(4, 4, 1).unwrap().with_riemann(move |_| MatForm::two_form(4, 4, &[((0, 1), ac.clone()), ((2, 3), bc.clone())]));
        // R ^ R = (AB + BA) dx0123
        let p1 = -2.0 * (&a * &b).trace() / (8.0 * PI * PI);
        let x = [0.0; 4];
        assert!((a_hat_form(&c).at(&x).top() + p1 / 24.0).abs() < 1e-15);
        assert!((l_form(&c).at(&x).top() - p1 / 3.0).abs() < 1e-15);
        assert_eq!(a_hat_form(&c).at(&x).coeff(0), 1.0);
        assert!(c.symmetry_defect(&x) == 0.0 && c.invariance_defect(10, 3.0, 1) == 0.0);
    }

    #[test]
    fn magnetic_chern_character() {
        let b = 2.5;
        let c = CurvatureData::magnetic(2, 2, b).unwrap();
        let ch = chern_character(&c).at(&[0.0, 0.0]);
        assert_eq!(ch.coeff(0), 1.0);
        assert!((ch.top() - b / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn chern_character_is_additive() {
        let f1 = DMatrix::from_element(1, 1, Complex64::new(0.0, -1.5));
        let f2 = DMatrix::from_element(1, 1, Complex64::new(0.0, 0.5));
        let mut sum = DMatrix::zeros(2, 2);
        sum[(0, 0)] = f1[(0, 0)];
        sum[(1, 1)] = f2[(0, 0)];
        let mk = |m: DMatrix<Complex64>| {
            let r = m.nrows();
            CurvatureData::flat(2, 2, r).unwrap().with_bundle(move |_| MatForm::two_form(2, r, &[((0, 1), m.clone())]))
        };
        let x = [0.3, -0.2];
        let lhs = chern_character(&mk(sum)).at(&x);
        let rhs = chern_character(&mk(f1)).at(&x).add(&chern_character(&mk(f2)).at(&x));
        assert!(lhs.add(&rhs.scale(-1.0)).max_abs() < 1e-15);
    }

    #[test]
    fn flat_plane_rhs() {
        let action = ProperActionData::new(2, 0.05, Slice::point()).unwrap();
        let chi = cutoff_family(0.5, &action).unwrap();
        let c = CurvatureData::flat(2, 2, 1).unwrap();
        let area = CharacteristicForm::pullback(&InvariantForm::euclidean_volume(2), 2, 2).unwrap();
        let v = higher_index_rhs(&atiyah_singer_form(&c), &chi, &area).unwrap();
        assert!((v - 1.0).abs() < 1e-6);
        let zero = CharacteristicForm::from_fn(2, vec![2], |_| ExtForm::zero(2));
        assert_eq!(higher_index_rhs(&atiyah_singer_form(&c), &chi, &zero).unwrap(), 0.0);
    }

    #[test]
    fn magnetic_rhs() {
        let action = ProperActionData::new(2, 0.05, Slice::point()).unwrap();
        let chi = cutoff_family(0.5, &action).unwrap();
        let one = CharacteristicForm::pullback(&InvariantForm::euclidean_basis(2, &[]), 2, 2).unwrap();
        for b in [1.0, 2.0 * PI, 10.0] {
            let c = CurvatureData::magnetic(2, 2, b).unwrap();
            let v = higher_index_rhs(&atiyah_singer_form(&c), &chi, &one).unwrap();
            assert!((v - b / (2.0 * PI)).abs() < 1e-6);
        }
    }

    #[test]
    fn odd_complement_is_a_degree_mismatch() {
        let action = ProperActionData::new(2, 0.1, Slice::point()).unwrap();
        let chi = cutoff_family(0.5, &action).unwrap();
        let dx = CharacteristicForm::pullback(&InvariantForm::euclidean_basis(2, &[0]), 2, 2).unwrap();
        let c = CurvatureData::flat(2, 2, 1).unwrap();
        assert_eq!(
            higher_index_rhs(&atiyah_singer_form(&c), &chi, &dx).unwrap_err(),
            Error::DegreeMismatch { needed: 1, top: 2 }
        );
    }

    #[test]
    fn exact_forms_on_a_cylinder_pair_to_zero() {
        let action = ProperActionData::new(1, 0.05, Slice::circle(64, 2.0 * PI).unwrap()).unwrap();
        let beta = CharacteristicForm::from_fn(2, vec![1], |x| ExtForm::monomial(2, &[0], (x[1]).sin() + 0.3 * (2.0 * x[1]).cos()));
        let alpha = beta.exterior_derivative(1e-4);
        assert!(alpha.invariance_defect(1, 10, 3.0, 2) < 1e-12);
        let l = l_form(&CurvatureData::flat(1, 2, 1).unwrap());
        for eps in [0.4, 0.8] {
            let chi = cutoff_family(eps, &action).unwrap();
            assert!(higher_signature(&l, &chi, &alpha).unwrap().abs() < 1e-6);
        }
    }
}

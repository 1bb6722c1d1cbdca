//! Hochschild and Connes operators on cochains over a sampled algebra,
//! idempotents over its unitization, and the Chern pairing.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::conv::{convolve, tau_g, ConvElement, LatticeGroup};
use crate::error::{Error, Result};
use crate::groupcoh::GroupCochain;

/// Default idempotency tolerance `|p^2 - p|`.
pub const IDEMPOTENT_TOL: f64 = 1e-10;

/// A (possibly non-unital) algebra with computable products and a
/// submultiplicative norm.
pub trait SampledAlgebra: Send + Sync {
    type Elem: Clone + Send + Sync + fmt::Debug;

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn scale(&self, a: &Self::Elem, s: f64) -> Self::Elem;
    fn zero(&self) -> Self::Elem;
    fn norm(&self, a: &Self::Elem) -> f64;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.add(a, &self.scale(b, -1.0))
    }
}

/// The real numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct ScalarAlgebra;

impl SampledAlgebra for ScalarAlgebra {
    type Elem = f64;

    fn mul(&self, a: &f64, b: &f64) -> Result<f64> {
        Ok(a * b)
    }
    fn add(&self, a: &f64, b: &f64) -> Result<f64> {
        Ok(a + b)
    }
    fn scale(&self, a: &f64, s: f64) -> f64 {
        a * s
    }
    fn zero(&self) -> f64 {
        0.0
    }
    fn norm(&self, a: &f64) -> f64 {
        a.abs()
    }
}

/// Real `d x d` matrices with the max-row-sum norm.
#[derive(Clone, Copy, Debug)]
pub struct MatrixAlgebra {
    pub dim: usize,
}

impl SampledAlgebra for MatrixAlgebra {
    type Elem = DMatrix<f64>;

    fn mul(&self, a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        Ok(a * b)
    }
    fn add(&self, a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        Ok(a + b)
    }
    fn scale(&self, a: &DMatrix<f64>, s: f64) -> DMatrix<f64> {
        a * s
    }
    fn zero(&self) -> DMatrix<f64> {
        DMatrix::zeros(self.dim, self.dim)
    }
    fn norm(&self, a: &DMatrix<f64>) -> f64 {
        a.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
    }
}

/// The convolution algebra with the `L^1` norm.
impl SampledAlgebra for LatticeGroup {
    type Elem = ConvElement;

    fn mul(&self, a: &ConvElement, b: &ConvElement) -> Result<ConvElement> {
        convolve(a, b)
    }
    fn add(&self, a: &ConvElement, b: &ConvElement) -> Result<ConvElement> {
        a.add(b)
    }
    fn scale(&self, a: &ConvElement, s: f64) -> ConvElement {
        a.scale(s)
    }
    fn zero(&self) -> ConvElement {
        ConvElement::zero(*self)
    }
    fn norm(&self, a: &ConvElement) -> f64 {
        a.values().iter().map(|v| v.abs()).sum::<f64>() * self.cell()
    }
}

/// `scalar . 1 + elem` in the unitization.
#[derive(Clone, Debug)]
pub struct Unitized<E> {
    pub scalar: f64,
    pub elem: E,
}

impl<E> Unitized<E> {
    pub fn new(scalar: f64, elem: E) -> Self {
        Self { scalar, elem }
    }
}

pub fn unit<A: SampledAlgebra>(alg: &A) -> Unitized<A::Elem> {
    Unitized::new(1.0, alg.zero())
}

pub fn lift<A: SampledAlgebra>(a: A::Elem) -> Unitized<A::Elem> {
    Unitized::new(0.0, a)
}

pub fn u_mul<A: SampledAlgebra>(alg: &A, x: &Unitized<A::Elem>, y: &Unitized<A::Elem>) -> Result<Unitized<A::Elem>> {
    let mut e = alg.mul(&x.elem, &y.elem)?;
    if y.scalar != 0.0 {
        e = alg.add(&e, &alg.scale(&x.elem, y.scalar))?;
    }
    if x.scalar != 0.0 {
        e = alg.add(&e, &alg.scale(&y.elem, x.scalar))?;
    }
    Ok(Unitized::new(x.scalar * y.scalar, e))
}

pub fn u_add<A: SampledAlgebra>(alg: &A, x: &Unitized<A::Elem>, y: &Unitized<A::Elem>) -> Result<Unitized<A::Elem>> {
    Ok(Unitized::new(x.scalar + y.scalar, alg.add(&x.elem, &y.elem)?))
}

pub fn u_scale<A: SampledAlgebra>(alg: &A, x: &Unitized<A::Elem>, s: f64) -> Unitized<A::Elem> {
    Unitized::new(x.scalar * s, alg.scale(&x.elem, s))
}

pub fn u_norm<A: SampledAlgebra>(alg: &A, x: &Unitized<A::Elem>) -> f64 {
    x.scalar.abs() + alg.norm(&x.elem)
}

type CyclicFn<E> = dyn Fn(&[Unitized<E>]) -> Result<f64> + Send + Sync;

/// A multilinear functional on `k + 1` elements of the unitization.
pub struct CyclicCochain<A: SampledAlgebra> {
    alg: Arc<A>,
    degree: usize,
    reduced: bool,
    eval: Arc<CyclicFn<A::Elem>>,
}

impl<A: SampledAlgebra> Clone for CyclicCochain<A> {
    fn clone(&self) -> Self {
        Self {
            alg: self.alg.clone(),
            degree: self.degree,
            reduced: self.reduced,
            eval: self.eval.clone(),
        }
    }
}

impl<A: SampledAlgebra> fmt::Debug for CyclicCochain<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CyclicCochain")
            .field("degree", &self.degree)
            .field("reduced", &self.reduced)
            .finish()
    }
}

impl<A: SampledAlgebra + 'static> CyclicCochain<A> {
    pub fn new<F>(alg: Arc<A>, degree: usize, reduced: bool, f: F) -> Self
    where
        F: Fn(&[Unitized<A::Elem>]) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            alg,
            degree,
            reduced,
            eval: Arc::new(f),
        }
    }

    /// The extension of a cochain on `A` that ignores every scalar part.
    pub fn extend_from_algebra<F>(alg: Arc<A>, degree: usize, f: F) -> Self
    where
        F: Fn(&[A::Elem]) -> Result<f64> + Send + Sync + 'static,
    {
        Self::new(alg, degree, true, move |x| {
            let e: Vec<A::Elem> = x.iter().map(|u| u.elem.clone()).collect();
            f(&e)
        })
    }

    pub fn algebra(&self) -> &Arc<A> {
        &self.alg
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn evaluate(&self, x: &[Unitized<A::Elem>]) -> Result<f64> {
        if x.len() != self.degree + 1 {
            return Err(Error::InvalidArgument(format!(
                "a {}-cochain takes {} arguments, got {}",
                self.degree,
                self.degree + 1,
                x.len()
            )));
        }
        (self.eval)(x)
    }

    /// Evaluation on elements of `A`.
    pub fn evaluate_elems(&self, x: &[A::Elem]) -> Result<f64> {
        let u: Vec<_> = x.iter().cloned().map(lift::<A>).collect();
        self.evaluate(&u)
    }

    /// `|tau(a_0..a_k) - (-1)^k tau(a_k, a_0, ..., a_{k-1})|`.
    pub fn cyclicity_defect(&self, x: &[Unitized<A::Elem>]) -> Result<f64> {
        let mut r = x.to_vec();
        r.rotate_right(1);
        let sign = if self.degree % 2 == 0 { 1.0 } else { -1.0 };
        Ok((self.evaluate(x)? - sign * self.evaluate(&r)?).abs())
    }

    pub fn add(&self, o: &CyclicCochain<A>) -> Result<Self> {
        if o.degree != self.degree {
            return Err(Error::InvalidArgument("cochains differ in degree".into()));
        }
        let (f, g) = (self.eval.clone(), o.eval.clone());
        Ok(Self::new(self.alg.clone(), self.degree, self.reduced && o.reduced, move |x| {
            Ok(f(x)? + g(x)?)
        }))
    }
}

/// `b tau(a_0..a_{k+1}) = sum_i (-1)^i tau(.., a_i a_{i+1}, ..) + (-1)^{k+1} tau(a_{k+1} a_0, a_1, .., a_k)`.
pub fn hochschild_b<A: SampledAlgebra + 'static>(tau: &CyclicCochain<A>) -> CyclicCochain<A> {
    let f = tau.eval.clone();
    let alg = tau.alg.clone();
    let k = tau.degree;
    CyclicCochain::new(tau.alg.clone(), k + 1, tau.reduced, move |x| {
        let mut total = 0.0;
        let mut args = Vec::with_capacity(k + 1);
        for i in 0..=k {
            args.clear();
            args.extend_from_slice(&x[..i]);
            args.push(u_mul(&*alg, &x[i], &x[i + 1])?);
            args.extend_from_slice(&x[i + 2..]);
            let v = f(&args)?;
            total += if i % 2 == 0 { v } else { -v };
        }
        args.clear();
        args.push(u_mul(&*alg, &x[k + 1], &x[0])?);
        args.extend_from_slice(&x[1..=k]);
        let v = f(&args)?;
        total += if (k + 1) % 2 == 0 { v } else { -v };
        Ok(total)
    })
}

/// `B tau(a_0..a_{k-1}) = sum_i (-1)^{(k-1) i} tau(1, a_i, .., a_{k-1}, a_0, .., a_{i-1})`.
pub fn connes_b<A: SampledAlgebra + 'static>(tau: &CyclicCochain<A>) -> Result<CyclicCochain<A>> {
    let k = tau.degree;
    if k == 0 {
        return Err(Error::InvalidArgument("B lowers the degree; degree 0 has no image".into()));
    }
    let f = tau.eval.clone();
    let alg = tau.alg.clone();
    Ok(CyclicCochain::new(tau.alg.clone(), k - 1, tau.reduced, move |x| {
        let mut total = 0.0;
        let mut args = Vec::with_capacity(k + 1);
        for i in 0..k {
            args.clear();
            args.push(unit(&*alg));
            args.extend_from_slice(&x[i..]);
            args.extend_from_slice(&x[..i]);
            let v = f(&args)?;
            total += if ((k - 1) * i) % 2 == 0 { v } else { -v };
        }
        Ok(total)
    }))
}

/// `tau^G_c` as a reduced cochain on the lattice algebra.
pub fn tau_g_cochain(c: &GroupCochain, lattice: LatticeGroup) -> CyclicCochain<LatticeGroup> {
    let c = c.clone();
    CyclicCochain::extend_from_algebra(Arc::new(lattice), c.degree(), move |a| tau_g(&c, a))
}

/// An `N x N` matrix over the unitization; entries are `scalar + elem`.
pub struct Idempotent<A: SampledAlgebra> {
    alg: Arc<A>,
    scalar: DMatrix<f64>,
    elems: Vec<A::Elem>,
}

impl<A: SampledAlgebra> Clone for Idempotent<A> {
    fn clone(&self) -> Self {
        Self {
            alg: self.alg.clone(),
            scalar: self.scalar.clone(),
            elems: self.elems.clone(),
        }
    }
}

impl<A: SampledAlgebra> fmt::Debug for Idempotent<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Idempotent").field("scalar", &self.scalar).field("elems", &self.elems).finish()
    }
}

impl<A: SampledAlgebra> Idempotent<A> {
    /// A matrix over the unitization, without the idempotency check.
    pub fn matrix(alg: Arc<A>, scalar: DMatrix<f64>, elems: Vec<A::Elem>) -> Result<Self> {
        let n = scalar.nrows();
        if scalar.ncols() != n || elems.len() != n * n {
            return Err(Error::InvalidArgument(format!("need a square scalar part and {} entries", n * n)));
        }
        Ok(Self { alg, scalar, elems })
    }

    /// Checks `|p^2 - p| <= IDEMPOTENT_TOL`.
    pub fn new(alg: Arc<A>, scalar: DMatrix<f64>, elems: Vec<A::Elem>) -> Result<Self> {
        let p = Self::matrix(alg, scalar, elems)?;
        let d = p.defect()?;
        if d > IDEMPOTENT_TOL {
            return Err(Error::NotIdempotent(d));
        }
        Ok(p)
    }

    /// A purely scalar matrix.
    pub fn scalar(alg: Arc<A>, scalar: DMatrix<f64>) -> Result<Self> {
        let z = alg.zero();
        let n = scalar.nrows();
        Self::new(alg, scalar, vec![z; n * n])
    }

    /// A matrix with zero scalar part.
    pub fn from_elems(alg: Arc<A>, n: usize, elems: Vec<A::Elem>) -> Result<Self> {
        Self::new(alg, DMatrix::zeros(n, n), elems)
    }

    pub fn size(&self) -> usize {
        self.scalar.nrows()
    }

    pub fn algebra(&self) -> &Arc<A> {
        &self.alg
    }

    pub fn scalar_part(&self) -> &DMatrix<f64> {
        &self.scalar
    }

    pub fn elems(&self) -> &[A::Elem] {
        &self.elems
    }

    pub fn entry(&self, i: usize, j: usize) -> Unitized<A::Elem> {
        Unitized::new(self.scalar[(i, j)], self.elems[i * self.size() + j].clone())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let n = self.size();
        if o.size() != n {
            return Err(Error::InvalidArgument("matrix sizes differ".into()));
        }
        let alg = &*self.alg;
        let scalar = &self.scalar * &o.scalar;
        let mut elems = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = alg.zero();
                for l in 0..n {
                    let prod = u_mul(alg, &self.entry(i, l), &o.entry(l, j))?;
                    acc = alg.add(&acc, &prod.elem)?;
                }
                elems.push(acc);
            }
        }
        Ok(Self { alg: self.alg.clone(), scalar, elems })
    }

    pub fn lin(&self, s: f64, o: &Self, t: f64) -> Result<Self> {
        let alg = &*self.alg;
        let elems = self
            .elems
            .iter()
            .zip(&o.elems)
            .map(|(a, b)| alg.add(&alg.scale(a, s), &alg.scale(b, t)))
            .collect::<Result<_>>()?;
        Ok(Self {
            alg: self.alg.clone(),
            scalar: &self.scalar * s + &o.scalar * t,
            elems,
        })
    }

    /// Max row sum of `|scalar| + |elem|`.
    pub fn norm(&self) -> f64 {
        let n = self.size();
        (0..n)
            .map(|i| (0..n).map(|j| u_norm(&*self.alg, &self.entry(i, j))).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `|p^2 - p|`.
    pub fn defect(&self) -> Result<f64> {
        Ok(self.mul(self)?.lin(1.0, self, -1.0)?.norm())
    }

    /// Newton iteration `p <- 3p^2 - 2p^3`, which converges when the defect
    /// is below 1/4.
    pub fn newton(&self) -> Result<Self> {
        let mut p = self.clone();
        let mut d = p.defect()?;
        if d >= 0.25 {
            return Err(Error::NotIdempotent(d));
        }
        for _ in 0..60 {
            if d <= 1e-14 {
                break;
            }
            let p2 = p.mul(&p)?;
            let p3 = p2.mul(&p)?;
            let next = p2.lin(3.0, &p3, -2.0)?;
            let dn = next.defect()?;
            if dn >= d {
                break;
            }
            p = next;
            d = dn;
        }
        if p.defect()? > IDEMPOTENT_TOL {
            return Err(Error::NotIdempotent(d));
        }
        Ok(p)
    }

    /// Block sum `p (+) q`.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let (n, m) = (self.size(), o.size());
        let s = n + m;
        let mut scalar = DMatrix::zeros(s, s);
        scalar.view_mut((0, 0), (n, n)).copy_from(&self.scalar);
        scalar.view_mut((n, n), (m, m)).copy_from(&o.scalar);
        let z = self.alg.zero();
        let mut elems = vec![z; s * s];
        for i in 0..n {
            for j in 0..n {
                elems[i * s + j] = self.elems[i * n + j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                elems[(n + i) * s + n + j] = o.elems[i * m + j].clone();
            }
        }
        Self { alg: self.alg.clone(), scalar, elems }
    }

    /// The same matrix with zero rows and columns appended.
    pub fn pad(&self, size: usize) -> Self {
        let n = self.size();
        if size <= n {
            return self.clone();
        }
        let zero = Self {
            alg: self.alg.clone(),
            scalar: DMatrix::zeros(size - n, size - n),
            elems: vec![self.alg.zero(); (size - n) * (size - n)],
        };
        self.direct_sum(&zero)
    }
}

/// `(-1)^m (2m)!/m! [tau(tr(p - 1/2, p, .., p)) - tau(tr(q - 1/2, q, .., q))]`.
pub fn chern_pairing<A: SampledAlgebra + 'static>(
    p: &Idempotent<A>,
    q: &Idempotent<A>,
    tau: &CyclicCochain<A>,
) -> Result<f64> {
    if tau.degree % 2 == 1 {
        return Err(Error::InvalidArgument(format!("pairing needs even degree, got {}", tau.degree)));
    }
    for e in [p, q] {
        let d = e.defect()?;
        if d > IDEMPOTENT_TOL {
            return Err(Error::NotIdempotent(d));
        }
    }
    let m = tau.degree / 2;
    let coef = (m + 1..=2 * m).map(|i| i as f64).product::<f64>() * if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok(coef * (generalized_trace(p, tau)? - generalized_trace(q, tau)?))
}

/// `sum tau(e_{i_0 i_1} - delta/2, e_{i_1 i_2}, ..., e_{i_{2m} i_0})`.
fn generalized_trace<A: SampledAlgebra + 'static>(e: &Idempotent<A>, tau: &CyclicCochain<A>) -> Result<f64> {
    let n = e.size();
    let k = tau.degree;
    let mut idx = vec![0usize; k + 1];
    let mut total = 0.0;
    let mut args = Vec::with_capacity(k + 1);
    loop {
        args.clear();
        for s in 0..=k {
            let (i, j) = (idx[s], idx[(s + 1) % (k + 1)]);
            let mut x = e.entry(i, j);
            if s == 0 && i == j {
                x.scalar -= 0.5;
            }
            args.push(x);
        }
        total += tau.evaluate(&args)?;
        let mut s = 0;
        while s <= k {
            idx[s] += 1;
            if idx[s] < n {
                break;
            }
            idx[s] = 0;
            s += 1;
        }
        if s > k {
            return Ok(total);
        }
    }
}

/// Generator data for a discretized path of idempotents.
pub enum ProjectionPath<A: SampledAlgebra> {
    Constant { p: Idempotent<A>, steps: usize },
    /// `R_t p_0 R_t^{-1}` with `p_0 = diag(1, 0)` and `R_t` the rotation by `t theta`.
    Rotation { alg: Arc<A>, theta: f64, steps: usize },
    /// `u_t p u_t^{-1}` with `u_t = 1 + t E`, `E` strictly upper triangular.
    Conjugation { p: Idempotent<A>, nilpotent: Idempotent<A>, steps: usize },
    /// `p + t Z` re-idempotented by Newton iteration at every step.
    Perturbed { p: Idempotent<A>, perturbation: Idempotent<A>, steps: usize },
}

/// The points `t = 0, 1/steps, ..., 1` of the path.
pub fn idempotent_from_projection_path<A: SampledAlgebra + 'static>(gen: &ProjectionPath<A>) -> Result<Vec<Idempotent<A>>> {
    match gen {
        ProjectionPath::Constant { p, steps } => Ok(vec![p.clone(); steps + 1]),
        ProjectionPath::Rotation { alg, theta, steps } => (0..=*steps)
            .map(|i| {
                let a = theta * i as f64 / *steps.max(&1) as f64;
                let (c, s) = (a.cos(), a.sin());
                // rank-one projection onto (cos a, sin a)
                let m = DMatrix::from_row_slice(2, 2, &[c * c, c * s, c * s, s * s]);
                Idempotent::scalar(alg.clone(), m)
            })
            .collect(),
        ProjectionPath::Conjugation { p, nilpotent, steps } => {
            let n = p.size();
            if nilpotent.size() != n
                || (0..n).any(|i| {
                    (0..=i).any(|j| nilpotent.scalar[(i, j)] != 0.0 || nilpotent.alg.norm(&nilpotent.elems[i * n + j]) != 0.0)
                })
            {
                return Err(Error::InvalidArgument("the conjugating matrix must be strictly upper triangular".into()));
            }
            let one = Idempotent::matrix(p.alg.clone(), DMatrix::identity(n, n), vec![p.alg.zero(); n * n])?;
            (0..=*steps)
                .map(|i| {
                    let t = i as f64 / *steps.max(&1) as f64;
                    let e = nilpotent.lin(t, nilpotent, 0.0)?;
                    let u = one.lin(1.0, &e, 1.0)?;
                    // (1 + tE)^{-1} = sum_j (-tE)^j, a finite sum
                    let mut inv = one.clone();
                    let mut power = one.clone();
                    for _ in 1..=n {
                        power = power.mul(&e)?.lin(-1.0, &one, 0.0)?;
                        inv = inv.lin(1.0, &power, 1.0)?;
                    }
                    let conj = u.mul(p)?.mul(&inv)?;
                    let d = conj.defect()?;
                    if d > IDEMPOTENT_TOL {
                        conj.newton()
                    } else {
                        Ok(conj)
                    }
                })
                .collect()
        }
        ProjectionPath::Perturbed { p, perturbation, steps } => (0..=*steps)
            .map(|i| {
                let t = i as f64 / *steps.max(&1) as f64;
                p.lin(1.0, perturbation, t)?.newton()
            })
            .collect(),
    }
}

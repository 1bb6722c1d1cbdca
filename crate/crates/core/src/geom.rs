//! Concrete nonpositively curved symmetric spaces `G/K`.
//!
//! Two models are built in: flat `R^n` (translations, trivial `K`) and the
//! hyperbolic plane `SL(2,R)/SO(2)` in the upper half-plane chart with
//! basepoint `i`. Every operation is chart-explicit.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Coordinates of a Euclidean point, translation or tangent vector.
pub type Coords = SmallVec<[f64; 4]>;

const DET_REJECT: f64 = 1e-8;
const MIN_IM: f64 = 1e-14;

/// A 2x2 real matrix of determinant one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sl2 {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Sl2 {
    /// Builds `[[a, b], [c, d]]`, silently rescaling by `1/sqrt(det)` when the
    /// determinant is within `1e-8` of one and rejecting it otherwise.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || (det - 1.0).abs() > DET_REJECT {
            return Err(Error::InvalidGroupElement(det));
        }
        Ok(Self::renormalized(a, b, c, d))
    }

    fn renormalized(a: f64, b: f64, c: f64, d: f64) -> Self {
        let s = (a * d - b * c).sqrt().recip();
        Self {
            a: a * s,
            b: b * s,
            c: c * s,
            d: d * s,
        }
    }

    pub const IDENTITY: Sl2 = Sl2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn entries(&self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Sl2) -> Sl2 {
        Self::renormalized(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn inverse(&self) -> Sl2 {
        Sl2 {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Rotation by `theta` about the basepoint `i` (an element of `K = SO(2)`).
    pub fn rotation(theta: f64) -> Sl2 {
        let (s, c) = (theta / 2.0).sin_cos();
        Sl2 {
            a: c,
            b: s,
            c: -s,
            d: c,
        }
    }

    /// The upper-triangular element `[[sqrt y, x/sqrt y], [0, 1/sqrt y]]` sending `i` to `z`.
    pub fn translation_to(z: Complex64) -> Sl2 {
        let r = z.im.sqrt();
        Sl2 {
            a: r,
            b: z.re / r,
            c: 0.0,
            d: 1.0 / r,
        }
    }

    pub fn mobius(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// Derivative of the Mobius map at `z`: `1/(cz+d)^2`.
    pub fn mobius_derivative(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        (den * den).inv()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GroupElement {
    Euclidean(Coords),
    Hyperbolic(Sl2),
}

impl GroupElement {
    pub fn translation(v: &[f64]) -> Self {
        GroupElement::Euclidean(Coords::from_slice(v))
    }

    pub fn sl2(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Sl2::new(a, b, c, d).map(GroupElement::Hyperbolic)
    }

    pub fn as_translation(&self) -> Option<&[f64]> {
        match self {
            GroupElement::Euclidean(v) => Some(v),
            GroupElement::Hyperbolic(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Euclidean(Coords),
    Hyperbolic(Complex64),
}

impl Point {
    pub fn euclidean(v: &[f64]) -> Self {
        Point::Euclidean(Coords::from_slice(v))
    }

    /// A point of the upper half-plane; rejects `Im z <= 1e-14`.
    pub fn hyperbolic(z: Complex64) -> Result<Self> {
        if !(z.im > MIN_IM) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::InvalidPoint(format!("{z} is not in the upper half-plane")));
        }
        Ok(Point::Hyperbolic(z))
    }

    pub fn as_complex(&self) -> Option<Complex64> {
        match self {
            Point::Hyperbolic(z) => Some(*z),
            Point::Euclidean(_) => None,
        }
    }

    pub fn as_coords(&self) -> Option<&[f64]> {
        match self {
            Point::Euclidean(v) => Some(v),
            Point::Hyperbolic(_) => None,
        }
    }
}

/// A tangent vector; in the hyperbolic chart `dz = dx + i dy`.
#[derive(Clone, Debug, PartialEq)]
pub enum TangentVector {
    Euclidean(Coords),
    Hyperbolic(Complex64),
}

impl TangentVector {
    pub fn euclidean(v: &[f64]) -> Self {
        TangentVector::Euclidean(Coords::from_slice(v))
    }

    pub fn is_finite(&self) -> bool {
        match self {
            TangentVector::Euclidean(v) => v.iter().all(|x| x.is_finite()),
            TangentVector::Hyperbolic(z) => z.re.is_finite() && z.im.is_finite(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        match self {
            TangentVector::Euclidean(v) => TangentVector::Euclidean(v.iter().map(|x| x * s).collect()),
            TangentVector::Hyperbolic(z) => TangentVector::Hyperbolic(z * s),
        }
    }

    pub fn add(&self, o: &TangentVector) -> Self {
        match (self, o) {
            (TangentVector::Euclidean(a), TangentVector::Euclidean(b)) => {
                TangentVector::Euclidean(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (TangentVector::Hyperbolic(a), TangentVector::Hyperbolic(b)) => TangentVector::Hyperbolic(a + b),
            _ => panic!("adding tangent vectors of different models"),
        }
    }

    /// Chart components (two real numbers for the hyperbolic chart).
    pub fn components(&self) -> Coords {
        match self {
            TangentVector::Euclidean(v) => v.clone(),
            TangentVector::Hyperbolic(z) => Coords::from_slice(&[z.re, z.im]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymmetricSpaceModel {
    Euclidean(usize),
    HyperbolicPlane,
}

impl fmt::Display for SymmetricSpaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetricSpaceModel::Euclidean(n) => write!(f, "euclidean({n})"),
            SymmetricSpaceModel::HyperbolicPlane => write!(f, "hyperbolic"),
        }
    }
}

fn mismatch(model: SymmetricSpaceModel) -> ! {
    panic!("argument does not belong to the {model} model")
}

impl SymmetricSpaceModel {
    /// Dimension of `G/K`.
    pub fn dim(&self) -> usize {
        match self {
            SymmetricSpaceModel::Euclidean(n) => *n,
            SymmetricSpaceModel::HyperbolicPlane => 2,
        }
    }

    pub fn basepoint(&self) -> Point {
        match self {
            SymmetricSpaceModel::Euclidean(n) => Point::Euclidean(SmallVec::from_elem(0.0, *n)),
            SymmetricSpaceModel::HyperbolicPlane => Point::Hyperbolic(Complex64::i()),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            SymmetricSpaceModel::Euclidean(n) => GroupElement::Euclidean(SmallVec::from_elem(0.0, *n)),
            SymmetricSpaceModel::HyperbolicPlane => GroupElement::Hyperbolic(Sl2::IDENTITY),
        }
    }

    pub fn contains_point(&self, x: &Point) -> bool {
        match (self, x) {
            (SymmetricSpaceModel::Euclidean(n), Point::Euclidean(v)) => v.len() == *n,
            (SymmetricSpaceModel::HyperbolicPlane, Point::Hyperbolic(z)) => z.im > MIN_IM,
            _ => false,
        }
    }

    pub fn contains_element(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (SymmetricSpaceModel::Euclidean(n), GroupElement::Euclidean(v)) => v.len() == *n,
            (SymmetricSpaceModel::HyperbolicPlane, GroupElement::Hyperbolic(m)) => (m.det() - 1.0).abs() <= 1e-12,
            _ => false,
        }
    }

    pub fn compose(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        match (g, h) {
            (GroupElement::Euclidean(a), GroupElement::Euclidean(b)) => {
                GroupElement::Euclidean(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (GroupElement::Hyperbolic(a), GroupElement::Hyperbolic(b)) => GroupElement::Hyperbolic(a.mul(b)),
            _ => mismatch(*self),
        }
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        match g {
            GroupElement::Euclidean(a) => GroupElement::Euclidean(a.iter().map(|x| -x).collect()),
            GroupElement::Hyperbolic(m) => GroupElement::Hyperbolic(m.inverse()),
        }
    }

    /// Left action: translation, resp. Mobius transformation.
    pub fn act(&self, g: &GroupElement, x: &Point) -> Result<Point> {
        match (g, x) {
            (GroupElement::Euclidean(a), Point::Euclidean(v)) => {
                Ok(Point::Euclidean(a.iter().zip(v).map(|(p, q)| p + q).collect()))
            }
            (GroupElement::Hyperbolic(m), Point::Hyperbolic(z)) => {
                let w = m.mobius(*z);
                if !(w.im > 0.0) {
                    return Err(Error::HyperbolicDomain(w.im));
                }
                Ok(Point::Hyperbolic(w))
            }
            _ => mismatch(*self),
        }
    }

    /// `g . basepoint`.
    pub fn orbit_point(&self, g: &GroupElement) -> Point {
        self.act(g, &self.basepoint()).expect("orbit of the basepoint stays in the model")
    }

    /// A group element sending the basepoint to `x`.
    pub fn element_to(&self, x: &Point) -> GroupElement {
        match x {
            Point::Euclidean(v) => GroupElement::Euclidean(v.clone()),
            Point::Hyperbolic(z) => GroupElement::Hyperbolic(Sl2::translation_to(*z)),
        }
    }

    /// Pushforward of a tangent vector at `x` under the action of `g`.
    pub fn pushforward(&self, g: &GroupElement, x: &Point, v: &TangentVector) -> TangentVector {
        match (g, x, v) {
            (GroupElement::Euclidean(_), Point::Euclidean(_), TangentVector::Euclidean(_)) => v.clone(),
            (GroupElement::Hyperbolic(m), Point::Hyperbolic(z), TangentVector::Hyperbolic(dz)) => {
                TangentVector::Hyperbolic(dz * m.mobius_derivative(*z))
            }
            _ => mismatch(*self),
        }
    }

    /// Riemannian length of `v` at `x`.
    pub fn tangent_norm(&self, x: &Point, v: &TangentVector) -> f64 {
        match (x, v) {
            (Point::Euclidean(_), TangentVector::Euclidean(w)) => w.iter().map(|t| t * t).sum::<f64>().sqrt(),
            (Point::Hyperbolic(z), TangentVector::Hyperbolic(dz)) => dz.norm() / z.im,
            _ => mismatch(*self),
        }
    }

    pub fn distance(&self, x: &Point, y: &Point) -> f64 {
        match (x, y) {
            (Point::Euclidean(a), Point::Euclidean(b)) => {
                a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
            }
            // arccosh(1 + |z-w|^2 / (2 Im z Im w)), written to stay accurate near the diagonal
            (Point::Hyperbolic(z), Point::Hyperbolic(w)) => {
                2.0 * ((z - w).norm() / (2.0 * (z.im * w.im).sqrt())).asinh()
            }
            _ => mismatch(*self),
        }
    }

    /// `d(eK, gK)`.
    pub fn displacement(&self, g: &GroupElement) -> f64 {
        self.distance(&self.basepoint(), &self.orbit_point(g))
    }

    /// The point at parameter `u` on the geodesic from `x` (u = 0) to `y` (u = 1).
    ///
    /// Equal to `g phi_u(g^-1 y)` for any `g` with `g eK = x`; the hyperbolic
    /// case interpolates on the hyperboloid, which keeps far-apart endpoints
    /// well conditioned.
    pub fn geodesic_point(&self, x: &Point, y: &Point, u: f64) -> Point {
        match (x, y) {
            (Point::Euclidean(a), Point::Euclidean(b)) => {
                Point::Euclidean(a.iter().zip(b).map(|(p, q)| p + u * (q - p)).collect())
            }
            (Point::Hyperbolic(z), Point::Hyperbolic(w)) => {
                if u == 0.0 {
                    return x.clone();
                }
                if u == 1.0 {
                    return y.clone();
                }
                let d = self.distance(x, y);
                if d < 1e-12 {
                    return Point::Hyperbolic(z + u * (w - z));
                }
                let (p, q) = (to_hyperboloid(*z), to_hyperboloid(*w));
                let (cp, cq) = (sinh_ratio((1.0 - u) * d, d), sinh_ratio(u * d, d));
                let h = [cp * p[0] + cq * q[0], cp * p[1] + cq * q[1], cp * p[2] + cq * q[2]];
                Point::Hyperbolic(from_hyperboloid(h))
            }
            _ => mismatch(*self),
        }
    }

    /// The geodesic contraction `phi_s(x) = exp(s log x)` towards the basepoint.
    pub fn contraction(&self, s: f64, x: &Point) -> Point {
        self.geodesic_point(&self.basepoint(), x, s)
    }

    /// Riemannian logarithm at the basepoint.
    pub fn log_base(&self, x: &Point) -> TangentVector {
        match x {
            Point::Euclidean(v) => TangentVector::Euclidean(v.clone()),
            Point::Hyperbolic(z) => {
                let d = self.distance(&self.basepoint(), x);
                let h = to_hyperboloid(*z);
                let r = h[1].hypot(h[2]);
                if r == 0.0 || d == 0.0 {
                    return TangentVector::Hyperbolic(Complex64::new(0.0, 0.0));
                }
                TangentVector::Hyperbolic(Complex64::new(h[1], h[2]) * (d / r))
            }
        }
    }

    /// Riemannian exponential at the basepoint.
    pub fn exp_base(&self, v: &TangentVector) -> Point {
        match v {
            TangentVector::Euclidean(w) => Point::Euclidean(w.clone()),
            TangentVector::Hyperbolic(dz) => {
                let d = dz.norm();
                if d == 0.0 {
                    return self.basepoint();
                }
                let s = d.sinh() / d;
                Point::Hyperbolic(from_hyperboloid([d.cosh(), s * dz.re, s * dz.im]))
            }
        }
    }

    /// Invariant volume form: `dx_1 ^ ... ^ dx_n`, resp. `dx ^ dy / y^2`.
    pub fn volume_form(&self) -> InvariantForm {
        match self {
            SymmetricSpaceModel::Euclidean(n) => InvariantForm::euclidean_volume(*n),
            SymmetricSpaceModel::HyperbolicPlane => InvariantForm::hyperbolic_area(),
        }
    }

    /// A group element at distance exactly `radius` from the identity, in a
    /// uniformly random direction (times a random element of `K`).
    pub fn sample_shell<R: Rng + ?Sized>(&self, radius: f64, rng: &mut R) -> GroupElement {
        match self {
            SymmetricSpaceModel::Euclidean(n) => {
                let dir = random_unit(*n, rng);
                GroupElement::Euclidean(dir.iter().map(|x| x * radius).collect())
            }
            SymmetricSpaceModel::HyperbolicPlane => {
                let theta = rng.gen_range(0.0..2.0 * PI);
                let x = self.exp_base(&TangentVector::Hyperbolic(Complex64::from_polar(radius, theta)));
                let k = Sl2::rotation(rng.gen_range(0.0..2.0 * PI));
                let z = x.as_complex().expect("hyperbolic point");
                GroupElement::Hyperbolic(Sl2::translation_to(z).mul(&k))
            }
        }
    }

    /// A group element whose orbit point is uniform in the geodesic ball of the
    /// given radius in the (radius, direction) parametrization.
    pub fn sample_ball<R: Rng + ?Sized>(&self, max_radius: f64, rng: &mut R) -> GroupElement {
        let r = rng.gen_range(0.0..=max_radius);
        self.sample_shell(r, rng)
    }
}

fn random_unit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Coords {
    loop {
        let v: Coords = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r2: f64 = v.iter().map(|x| x * x).sum();
        if r2 > 1e-6 && r2 <= 1.0 {
            let r = r2.sqrt();
            return v.iter().map(|x| x / r).collect();
        }
    }
}

/// `sinh(a) / sinh(d)` for `0 <= a <= d`, without overflow.
fn sinh_ratio(a: f64, d: f64) -> f64 {
    (a - d).exp() * (-(-2.0 * a).exp_m1()) / (-(-2.0 * d).exp_m1())
}

fn to_hyperboloid(z: Complex64) -> [f64; 3] {
    let r2 = z.norm_sqr();
    let y2 = 2.0 * z.im;
    [(r2 + 1.0) / y2, z.re / z.im, (r2 - 1.0) / y2]
}

fn from_hyperboloid(h: [f64; 3]) -> Complex64 {
    // X0 - X2 = 1/y; use (X0 - X2)(X0 + X2) = 1 + X1^2 to avoid cancellation.
    let inv_y = if h[2] > 0.0 {
        (1.0 + h[1] * h[1]) / (h[0] + h[2])
    } else {
        h[0] - h[2]
    };
    Complex64::new(h[1] / inv_y, 1.0 / inv_y)
}

type FormFn = dyn Fn(&Point, &[TangentVector]) -> f64 + Send + Sync;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormTag {
    EuclideanVolume(usize),
    HyperbolicArea,
    /// `dx_{i_1} ^ ... ^ dx_{i_k}` on `R^n`.
    EuclideanBasis(usize, Vec<usize>),
    Custom(String),
}

/// A `G`-invariant differential form on `G/K`, evaluated pointwise.
#[derive(Clone)]
pub struct InvariantForm {
    degree: usize,
    tag: FormTag,
    eval: Arc<FormFn>,
}

impl fmt::Debug for InvariantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InvariantForm")
            .field("degree", &self.degree)
            .field("tag", &self.tag)
            .finish()
    }
}

impl InvariantForm {
    pub fn new<F>(degree: usize, name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&Point, &[TangentVector]) -> f64 + Send + Sync + 'static,
    {
        Self {
            degree,
            tag: FormTag::Custom(name.into()),
            eval: Arc::new(eval),
        }
    }

    pub fn euclidean_volume(n: usize) -> Self {
        let mut f = Self::euclidean_basis(n, &(0..n).collect::<Vec<_>>());
        f.tag = FormTag::EuclideanVolume(n);
        f
    }

    pub fn euclidean_basis(n: usize, indices: &[usize]) -> Self {
        assert!(indices.iter().all(|&i| i < n), "basis index out of range");
        let idx = indices.to_vec();
        let k = idx.len();
        Self {
            degree: k,
            tag: FormTag::EuclideanBasis(n, idx.clone()),
            eval: Arc::new(move |_, v| {
                let mut m = nalgebra::DMatrix::<f64>::zeros(k, k);
                for (col, t) in v.iter().enumerate() {
                    let c = t.components();
                    for (row, &i) in idx.iter().enumerate() {
                        m[(row, col)] = c[i];
                    }
                }
                determinant(m)
            }),
        }
    }

    pub fn hyperbolic_area() -> Self {
        Self {
            degree: 2,
            tag: FormTag::HyperbolicArea,
            eval: Arc::new(|x, v| {
                let y = x.as_complex().expect("hyperbolic point").im;
                let (a, b) = match (&v[0], &v[1]) {
                    (TangentVector::Hyperbolic(a), TangentVector::Hyperbolic(b)) => (*a, *b),
                    _ => panic!("hyperbolic area form needs hyperbolic tangents"),
                };
                (a.re * b.im - a.im * b.re) / (y * y)
            }),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn tag(&self) -> &FormTag {
        &self.tag
    }

    pub fn evaluate(&self, x: &Point, v: &[TangentVector]) -> f64 {
        debug_assert_eq!(v.len(), self.degree);
        (self.eval)(x, v)
    }

    /// Largest deviation `|g*alpha - alpha|` over the given samples.
    pub fn invariance_defect(
        &self,
        model: &SymmetricSpaceModel,
        samples: &[(GroupElement, Point, Vec<TangentVector>)],
    ) -> f64 {
        samples
            .iter()
            .map(|(g, x, v)| {
                let gx = model.act(g, x).expect("sample point stays in the model");
                let gv: Vec<_> = v.iter().map(|t| model.pushforward(g, x, t)).collect();
                (self.evaluate(&gx, &gv) - self.evaluate(x, v)).abs()
            })
            .fold(0.0, f64::max)
    }
}

fn determinant(m: nalgebra::DMatrix<f64>) -> f64 {
    match m.nrows() {
        0 => 1.0,
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => m.determinant(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const H: SymmetricSpaceModel = SymmetricSpaceModel::HyperbolicPlane;
    const E2: SymmetricSpaceModel = SymmetricSpaceModel::Euclidean(2);

    fn hp(re: f64, im: f64) -> Point {
        Point::hyperbolic(Complex64::new(re, im)).unwrap()
    }

    fn close(a: &Point, b: &Point, tol: f64) -> bool {
        match (a, b) {
            (Point::Euclidean(x), Point::Euclidean(y)) => x.iter().zip(y).all(|(p, q)| (p - q).abs() <= tol),
            (Point::Hyperbolic(z), Point::Hyperbolic(w)) => (z - w).norm() <= tol,
            _ => false,
        }
    }

    #[test]
    fn act_examples() {
        let g = GroupElement::translation(&[1.0, 2.0]);
        assert_eq!(E2.act(&g, &Point::euclidean(&[3.0, 4.0])).unwrap(), Point::euclidean(&[4.0, 6.0]));

        let t = GroupElement::sl2(1.0, 1.0, 0.0, 1.0).unwrap();
        assert!(close(&H.act(&t, &hp(0.0, 1.0)).unwrap(), &hp(1.0, 1.0), 1e-15));

        // (0*2i - 1)/(1*2i + 0) = -1/(2i) = i/2
        let s = GroupElement::sl2(0.0, -1.0, 1.0, 0.0).unwrap();
        assert!(close(&H.act(&s, &hp(0.0, 2.0)).unwrap(), &hp(0.0, 0.5), 1e-15));
    }

    #[test]
    fn determinant_is_enforced() {
        assert!(matches!(Sl2::new(2.0, 0.0, 0.0, 1.0), Err(Error::InvalidGroupElement(_))));
        let m = Sl2::new(1.0 + 4e-9, 0.0, 0.0, 1.0).unwrap();
        assert!((m.det() - 1.0).abs() < 1e-15);
        assert!(Point::hyperbolic(Complex64::new(0.0, 1e-15)).is_err());
        assert!(Point::hyperbolic(Complex64::new(0.0, -1.0)).is_err());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(E2.distance(&Point::euclidean(&[0.0, 0.0]), &Point::euclidean(&[3.0, 4.0])), 5.0);
        // arccosh(1 + 1/4) = ln 2
        let oracle = (1.25f64).acosh();
        assert!((oracle - 2f64.ln()).abs() < 1e-15);
        assert!((H.distance(&hp(0.0, 1.0), &hp(0.0, 2.0)) - oracle).abs() < 1e-14);
        let z = hp(0.3, 0.7);
        assert_eq!(H.distance(&z, &z), 0.0);
    }

    #[test]
    fn contraction_examples() {
        assert!(close(&E2.contraction(0.5, &Point::euclidean(&[4.0, 0.0])), &Point::euclidean(&[2.0, 0.0]), 1e-15));
        // the vertical geodesic t -> e^t i has unit speed, so halfway from i to 4i is 2i
        assert!(close(&H.contraction(0.5, &hp(0.0, 4.0)), &hp(0.0, 2.0), 1e-13));
        assert!(close(&H.contraction(0.0, &hp(3.0, 0.2)), &H.basepoint(), 0.0));
        assert!(close(&H.contraction(1.0, &hp(3.0, 0.2)), &hp(3.0, 0.2), 0.0));
    }

    #[test]
    fn log_examples() {
        assert_eq!(E2.log_base(&Point::euclidean(&[3.0, 4.0])), TangentVector::euclidean(&[3.0, 4.0]));
        let v = H.log_base(&hp(0.0, std::f64::consts::E));
        let TangentVector::Hyperbolic(dz) = v else { unreachable!() };
        assert!((dz - Complex64::i()).norm() < 1e-14);
        assert_eq!(H.log_base(&H.basepoint()), TangentVector::Hyperbolic(Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn group_and_metric_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for model in [H, E2, SymmetricSpaceModel::Euclidean(3)] {
            for _ in 0..200 {
                let g = model.sample_ball(3.0, &mut rng);
                let h = model.sample_ball(3.0, &mut rng);
                let x = model.orbit_point(&model.sample_ball(3.0, &mut rng));
                let y = model.orbit_point(&model.sample_ball(3.0, &mut rng));
                let lhs = model.act(&g, &model.act(&h, &x).unwrap()).unwrap();
                let rhs = model.act(&model.compose(&g, &h), &x).unwrap();
                let scale = 1.0 + model.distance(&model.basepoint(), &lhs).exp();
                assert!(model.distance(&lhs, &rhs) <= 1e-10 * scale);

                let dxy = model.distance(&x, &y);
                let gxy = model.distance(&model.act(&g, &x).unwrap(), &model.act(&g, &y).unwrap());
                assert!((dxy - gxy).abs() <= 1e-9, "isometry {dxy} vs {gxy}");

                let s: f64 = rng.gen_range(0.0..=1.0);
                let d0 = model.distance(&model.basepoint(), &x);
                let ds = model.distance(&model.basepoint(), &model.contraction(s, &x));
                assert!((ds - s * d0).abs() <= 1e-9);

                let v = model.log_base(&x);
                assert!((model.tangent_norm(&model.basepoint(), &v) - d0).abs() <= 1e-9);
                assert!(model.distance(&model.exp_base(&v.scale(s)), &model.contraction(s, &x)) <= 1e-9);
            }
        }
    }

    #[test]
    fn geodesic_point_matches_translated_contraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let x = H.orbit_point(&H.sample_ball(4.0, &mut rng));
            let y = H.orbit_point(&H.sample_ball(4.0, &mut rng));
            let u: f64 = rng.gen_range(0.0..=1.0);
            let g = H.element_to(&x);
            let gi = H.inverse(&g);
            let literal = H.act(&g, &H.contraction(u, &H.act(&gi, &y).unwrap())).unwrap();
            assert!(H.distance(&literal, &H.geodesic_point(&x, &y, u)) < 1e-8);
            let dxy = H.distance(&x, &y);
            assert!((H.distance(&x, &H.geodesic_point(&x, &y, u)) - u * dxy).abs() < 1e-9);
        }
    }

    #[test]
    fn builtin_forms_are_invariant_and_alternating() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for model in [H, E2] {
            let form = model.volume_form();
            let mut samples = Vec::new();
            for _ in 0..100 {
                let g = model.sample_ball(4.0, &mut rng);
                let x = model.orbit_point(&model.sample_ball(2.0, &mut rng));
                let v: Vec<_> = (0..2)
                    .map(|_| match model {
                        SymmetricSpaceModel::HyperbolicPlane => TangentVector::Hyperbolic(Complex64::new(
                            rng.gen_range(-1.0..1.0),
                            rng.gen_range(-1.0..1.0),
                        )),
                        _ => TangentVector::euclidean(&[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]),
                    })
                    .collect();
                let swapped = [v[1].clone(), v[0].clone()];
                assert!((form.evaluate(&x, &v) + form.evaluate(&x, &swapped)).abs() < 1e-10);
                let w = v[0].scale(2.5).add(&v[1]);
                let lin = form.evaluate(&x, &[w, v[1].clone()]) - 2.5 * form.evaluate(&x, &v);
                assert!(lin.abs() < 1e-10 * (1.0 + form.evaluate(&x, &v).abs()));
                samples.push((g, x, v));
            }
            assert!(form.invariance_defect(&model, &samples) <= 1e-9);
        }
    }
}

//! Geodesic simplices, quadrature on the standard simplex, and integration
//! of invariant forms over geodesic simplices.
//!
//! The simplex `Delta^k(g_0 K, ..., g_k K)` is the geodesic cone over
//! `Delta^{k-1}(g_1 K, ..., g_k K)` with tip `g_0 K`. In barycentric
//! coordinates the tip sits at `t_0 = 1` and the opposite face at `t_0 = 0`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom::{Coords, GroupElement, InvariantForm, Point, SymmetricSpaceModel, TangentVector};

/// Largest simplex degree supported.
pub const MAX_DEGREE: usize = 4;

/// Default central-difference step for chart tangents.
pub const FD_STEP: f64 = 1e-5;

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..(m + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // three-term recurrence for P_m and its derivative
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=m {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * pm - pm1) / (x * x - 1.0);
            let dx = pm / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = (1.0 - x) / 2.0;
        nodes[m - 1 - i] = (1.0 + x) / 2.0;
        weights[i] = w / 2.0;
        weights[m - 1 - i] = w / 2.0;
    }
    (nodes, weights)
}

/// A quadrature rule on the standard simplex `{t_i >= 0, sum t_i = 1}`.
///
/// Nodes are barycentric; weights sum to `1/k!`, the volume of the simplex in
/// the coordinates `(t_1, ..., t_k)`. Built as a conical (Stroud) product of
/// Gauss-Legendre rules collapsed at vertex 0, so the cone parameter of the
/// geodesic chart is integrated by a tensor rule.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    dim: usize,
    order: usize,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// A rule on `Delta^dim` exact for polynomials of total degree `<= order`.
    pub fn new(dim: usize, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("quadrature order must be positive".into()));
        }
        if dim > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!("simplex degree {dim} exceeds {MAX_DEGREE}")));
        }
        let (nodes, weights) = conical(dim, order);
        Ok(Self {
            dim,
            order,
            nodes,
            weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_j w_j f(t_j)` in fixed node order.
    pub fn apply<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(t, w)| w * f(t)).sum()
    }
}

fn conical(dim: usize, order: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    if dim == 0 {
        return (vec![vec![1.0]], vec![1.0]);
    }
    let (face_nodes, face_weights) = conical(dim - 1, order);
    let m = (order + dim).div_ceil(2);
    let (us, ws) = gauss_legendre(m);
    let mut nodes = Vec::with_capacity(m * face_weights.len());
    let mut weights = Vec::with_capacity(nodes.capacity());
    for (u, wu) in us.iter().zip(&ws) {
        let jac = u.powi(dim as i32 - 1);
        for (s, wsf) in face_nodes.iter().zip(&face_weights) {
            let mut t = Vec::with_capacity(dim + 1);
            t.push(1.0 - u);
            t.extend(s.iter().map(|si| u * si));
            nodes.push(t);
            weights.push(wu * jac * wsf);
        }
    }
    (nodes, weights)
}

/// A geodesic simplex `Delta^k(g_0 K, ..., g_k K)`.
#[derive(Clone, Debug)]
pub struct GeodesicSimplex {
    model: SymmetricSpaceModel,
    vertices: Vec<GroupElement>,
    points: Vec<Point>,
}

impl GeodesicSimplex {
    pub fn new(model: SymmetricSpaceModel, vertices: Vec<GroupElement>) -> Result<Self> {
        if vertices.is_empty() || vertices.len() > MAX_DEGREE + 1 {
            return Err(Error::InvalidArgument(format!(
                "a geodesic simplex needs 1..={} vertices, got {}",
                MAX_DEGREE + 1,
                vertices.len()
            )));
        }
        if let Some(g) = vertices.iter().find(|g| !model.contains_element(g)) {
            return Err(Error::ModelMismatch(format!("{g:?} is not an element of the {model} model")));
        }
        let points = vertices.iter().map(|g| model.orbit_point(g)).collect();
        Ok(Self {
            model,
            vertices,
            points,
        })
    }

    pub fn degree(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn model(&self) -> SymmetricSpaceModel {
        self.model
    }

    pub fn vertices(&self) -> &[GroupElement] {
        &self.vertices
    }

    /// The vertex points `g_i K`.
    pub fn vertex_points(&self) -> &[Point] {
        &self.points
    }

    /// `g . Delta^k(...) = Delta^k(g g_0 K, ...)`.
    pub fn translate(&self, g: &GroupElement) -> Self {
        let vertices = self.vertices.iter().map(|v| self.model.compose(g, v)).collect();
        Self::new(self.model, vertices).expect("translation preserves validity")
    }

    pub fn point(&self, t: &[f64]) -> Result<Point> {
        simplex_point(self, t)
    }
}

/// The chart point of `Delta^k` at barycentric coordinates `t`.
pub fn simplex_point(s: &GeodesicSimplex, t: &[f64]) -> Result<Point> {
    if t.len() != s.points.len() {
        return Err(Error::InvalidBarycentric(format!(
            "expected {} coordinates, got {}",
            s.points.len(),
            t.len()
        )));
    }
    if t.iter().any(|&x| !(x >= -1e-15)) {
        return Err(Error::InvalidBarycentric(format!("negative coordinate in {t:?}")));
    }
    let sum: f64 = t.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidBarycentric(format!("coordinates sum to {sum}")));
    }
    Ok(cone_point(&s.model, &s.points, t))
}

/// Cone-chart evaluation without validation.
///
/// Level `j` carries the barycentric mass `m_j = sum_{i >= j} t_i`; the point
/// is the geodesic from vertex `j` towards the level `j+1` point at parameter
/// `u_j = m_{j+1} / m_j`. When `u_j` underflows the level collapses onto its
/// tip (the removable singularity of the chart).
pub(crate) fn cone_point(model: &SymmetricSpaceModel, points: &[Point], t: &[f64]) -> Point {
    let k = points.len() - 1;
    let mut mass = [0.0f64; MAX_DEGREE + 2];
    for j in (0..=k).rev() {
        mass[j] = mass[j + 1] + t[j].max(0.0);
    }
    let mut current = points[k].clone();
    for j in (0..k).rev() {
        let u = if mass[j] > 0.0 { mass[j + 1] / mass[j] } else { 0.0 };
        current = if u < 1e-14 {
            points[j].clone()
        } else {
            model.geodesic_point(&points[j], &current, u.min(1.0))
        };
    }
    current
}

/// Options for the chart differential.
#[derive(Clone, Copy, Debug)]
pub struct ChartOptions {
    pub fd_step: f64,
    pub richardson: bool,
}

impl Default for ChartOptions {
    fn default() -> Self {
        Self {
            fd_step: FD_STEP,
            richardson: false,
        }
    }
}

/// Tangent vectors `d sigma / d t_i` (direction `e_i - e_0`), `i = 1..k`.
fn chart_tangents(model: &SymmetricSpaceModel, points: &[Point], t: &[f64], opts: &ChartOptions) -> Vec<TangentVector> {
    let k = points.len() - 1;
    if let SymmetricSpaceModel::Euclidean(_) = model {
        // the chart is affine
        let v0 = points[0].as_coords().expect("euclidean point");
        return points[1..]
            .iter()
            .map(|p| {
                let vi = p.as_coords().expect("euclidean point");
                TangentVector::Euclidean(vi.iter().zip(v0).map(|(a, b)| a - b).collect::<Coords>())
            })
            .collect();
    }
    (1..=k)
        .map(|i| {
            let h = opts.fd_step.min(0.5 * t[0]).min(0.5 * t[i]);
            let d = central_difference(model, points, t, i, h);
            if opts.richardson {
                let d2 = central_difference(model, points, t, i, h / 2.0);
                d2.scale(4.0 / 3.0).add(&d.scale(-1.0 / 3.0))
            } else {
                d
            }
        })
        .collect()
}

fn central_difference(model: &SymmetricSpaceModel, points: &[Point], t: &[f64], i: usize, h: f64) -> TangentVector {
    let mut tp = [0.0; MAX_DEGREE + 1];
    let mut tm = [0.0; MAX_DEGREE + 1];
    let n = t.len();
    tp[..n].copy_from_slice(t);
    tm[..n].copy_from_slice(t);
    tp[i] += h;
    tp[0] -= h;
    tm[i] -= h;
    tm[0] += h;
    let a = cone_point(model, points, &tp[..n]);
    let b = cone_point(model, points, &tm[..n]);
    match (a, b) {
        (Point::Hyperbolic(za), Point::Hyperbolic(zb)) => TangentVector::Hyperbolic((za - zb) / (2.0 * h)),
        (Point::Euclidean(va), Point::Euclidean(vb)) => {
            TangentVector::Euclidean(va.iter().zip(&vb).map(|(x, y)| (x - y) / (2.0 * h)).collect())
        }
        _ => unreachable!("chart points share a model"),
    }
}

/// `int_{Delta^k} sigma^* alpha` over the simplex spanned by the given vertex
/// points, signed by vertex order.
pub fn integrate_on_points(
    model: &SymmetricSpaceModel,
    form: &InvariantForm,
    points: &[Point],
    q: &QuadratureRule,
    opts: &ChartOptions,
) -> Result<f64> {
    let k = points.len() - 1;
    if form.degree() != k || q.dim() != k {
        return Err(Error::InvalidArgument(format!(
            "form degree {}, simplex degree {k}, quadrature dimension {}",
            form.degree(),
            q.dim()
        )));
    }
    if k == 0 {
        return Ok(form.evaluate(&points[0], &[]));
    }
    Ok(q.apply(|t| {
        let x = cone_point(model, points, t);
        let v = chart_tangents(model, points, t, opts);
        form.evaluate(&x, &v)
    }))
}

/// The signed integral of `form` over the geodesic simplex.
pub fn integrate_form(form: &InvariantForm, s: &GeodesicSimplex, q: &QuadratureRule) -> Result<f64> {
    integrate_on_points(&s.model, form, &s.points, q, &ChartOptions::default())
}

pub fn integrate_form_with(
    form: &InvariantForm,
    s: &GeodesicSimplex,
    q: &QuadratureRule,
    opts: &ChartOptions,
) -> Result<f64> {
    integrate_on_points(&s.model, form, &s.points, q, opts)
}

/// The integral together with an error estimate `|I(q) - I(q/2)|`, floored
/// at `1e-14 (1 + |I|)`.
pub fn integrate_form_with_estimate(form: &InvariantForm, s: &GeodesicSimplex, q: &QuadratureRule) -> Result<(f64, f64)> {
    let value = integrate_form(form, s, q)?;
    let coarse = QuadratureRule::new(q.dim(), (q.order() / 2).max(1))?;
    let rough = integrate_form(form, s, &coarse)?;
    Ok((value, (value - rough).abs().max(1e-14 * (1.0 + value.abs()))))
}

/// Riemannian volume of a top-dimensional geodesic simplex.
pub fn simplex_volume(s: &GeodesicSimplex, q: &QuadratureRule) -> Result<f64> {
    if s.degree() != s.model.dim() {
        return Err(Error::InvalidArgument(format!(
            "volume needs a simplex of degree {}, got {}",
            s.model.dim(),
            s.degree()
        )));
    }
    Ok(integrate_form(&s.model.volume_form(), s, q)?.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Sl2;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const H: SymmetricSpaceModel = SymmetricSpaceModel::HyperbolicPlane;
    const E2: SymmetricSpaceModel = SymmetricSpaceModel::Euclidean(2);

    fn tr(v: &[f64]) -> GroupElement {
        GroupElement::translation(v)
    }

    fn to(z: Complex64) -> GroupElement {
        GroupElement::Hyperbolic(Sl2::translation_to(z))
    }

    fn shoelace(p: &[[f64; 2]; 3]) -> f64 {
        0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]))
    }

    /// Signed area by the angle defect; angles measured from log directions.
    fn gauss_bonnet(z: [Complex64; 3]) -> f64 {
        let dir = |a: Complex64, b: Complex64| {
            let w = (b - a.re) / a.im;
            let c = (w - Complex64::i()) / (w + Complex64::i());
            c / c.norm()
        };
        let mut total = 0.0;
        let mut orient = 0.0;
        for j in 0..3 {
            let (a, b, c) = (z[j], z[(j + 1) % 3], z[(j + 2) % 3]);
            let turn = (dir(a, c) / dir(a, b)).arg();
            total += turn.abs();
            if j == 0 {
                orient = turn.signum();
            }
        }
        orient * (PI - total)
    }

    #[test]
    fn gauss_legendre_integrates_monomials() {
        for m in 1..12 {
            let (x, w) = gauss_legendre(m);
            for p in 0..2 * m {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p as i32)).sum();
                assert!((q - 1.0 / (p as f64 + 1.0)).abs() < 1e-14, "m={m} p={p}");
            }
        }
    }

    #[test]
    fn quadrature_weights_and_exactness() {
        // int_{Delta^k} t^a = a! k! / (|a| + k)! / k!  in (t_1..t_k) coordinates
        let fact = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
        for k in 0..=MAX_DEGREE {
            for order in [1, 2, 3, 5, 8] {
                let q = QuadratureRule::new(k, order).unwrap();
                let total: f64 = q.weights().iter().sum();
                assert!((total - 1.0 / fact(k)).abs() < 1e-14);
                let mut rng = ChaCha8Rng::seed_from_u64(order as u64);
                for _ in 0..10 {
                    let mut a = vec![0usize; k + 1];
                    for _ in 0..rng.gen_range(0..=order) {
                        a[rng.gen_range(0..=k)] += 1;
                    }
                    let deg: usize = a.iter().sum();
                    let exact = a.iter().map(|&ai| fact(ai)).product::<f64>() / fact(deg + k);
                    let approx = q.apply(|t| t.iter().zip(&a).map(|(ti, &ai)| ti.powi(ai as i32)).product());
                    assert!((approx - exact).abs() < 1e-14, "k={k} order={order} a={a:?}");
                }
            }
        }
        assert!(QuadratureRule::new(2, 0).is_err());
        assert!(QuadratureRule::new(5, 2).is_err());
    }

    #[test]
    fn simplex_point_examples() {
        let s = GeodesicSimplex::new(E2, vec![tr(&[0.0, 0.0]), tr(&[1.0, 0.0]), tr(&[0.0, 1.0])]).unwrap();
        let c = s.point(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]).unwrap();
        let c = c.as_coords().unwrap();
        assert!((c[0] - 1.0 / 3.0).abs() < 1e-15 && (c[1] - 1.0 / 3.0).abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for model in [E2, H] {
            let verts: Vec<_> = (0..4).map(|_| model.sample_ball(3.0, &mut rng)).collect();
            let s = GeodesicSimplex::new(model, verts).unwrap();
            for i in 0..4 {
                let mut t = [0.0; 4];
                t[i] = 1.0;
                let p = s.point(&t).unwrap();
                assert!(model.distance(&p, &s.vertex_points()[i]) < 1e-12);
            }
        }

        let g = H.sample_ball(2.0, &mut rng);
        let s = GeodesicSimplex::new(H, vec![H.identity(), g.clone()]).unwrap();
        let mid = s.point(&[0.5, 0.5]).unwrap();
        let oracle = H.contraction(0.5, &H.orbit_point(&g));
        assert!(H.distance(&mid, &oracle) < 1e-12);

        assert!(matches!(s.point(&[0.7, 0.7]), Err(Error::InvalidBarycentric(_))));
        assert!(matches!(s.point(&[1.0]), Err(Error::InvalidBarycentric(_))));
        assert!(matches!(s.point(&[1.5, -0.5]), Err(Error::InvalidBarycentric(_))));
    }

    /// The recursion written with group elements and the contraction at the
    /// basepoint, exactly as the cone construction is usually stated.
    fn literal_point(model: &SymmetricSpaceModel, g: &[GroupElement], t: &[f64]) -> Point {
        if g.len() == 1 {
            return model.orbit_point(&g[0]);
        }
        let u = 1.0 - t[0];
        if u < 1e-14 {
            return model.orbit_point(&g[0]);
        }
        let g0i = model.inverse(&g[0]);
        let rest: Vec<_> = g[1..].iter().map(|h| model.compose(&g0i, h)).collect();
        let s: Vec<_> = t[1..].iter().map(|x| x / u).collect();
        let inner = literal_point(model, &rest, &s);
        model.act(&g[0], &model.contraction(u, &inner)).unwrap()
    }

    #[test]
    fn chart_matches_literal_recursion() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for model in [E2, H] {
            for _ in 0..50 {
                let verts: Vec<_> = (0..4).map(|_| model.sample_ball(2.5, &mut rng)).collect();
                let s = GeodesicSimplex::new(model, verts.clone()).unwrap();
                let mut t: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..1.0)).collect();
                let sum: f64 = t.iter().sum();
                t.iter_mut().for_each(|x| *x /= sum);
                let a = s.point(&t).unwrap();
                let b = literal_point(&model, &verts, &t);
                assert!(model.distance(&a, &b) < 1e-9);
            }
        }
    }

    #[test]
    fn euclidean_integrals_are_exact() {
        let area = InvariantForm::euclidean_volume(2);
        let q = QuadratureRule::new(2, 1).unwrap();
        let s = GeodesicSimplex::new(E2, vec![tr(&[0.0, 0.0]), tr(&[2.0, 0.0]), tr(&[0.0, 2.0])]).unwrap();
        assert!((integrate_form(&area, &s, &q).unwrap() - 2.0).abs() < 1e-15);
        let s = GeodesicSimplex::new(E2, vec![tr(&[1.0, 0.0]), tr(&[1.0, 0.0]), tr(&[0.0, 2.0])]).unwrap();
        assert_eq!(integrate_form(&area, &s, &q).unwrap(), 0.0);
        let s = GeodesicSimplex::new(E2, vec![tr(&[0.0, 0.0]), tr(&[1.0, 0.0]), tr(&[0.0, 1.0])]).unwrap();
        assert!((simplex_volume(&s, &q).unwrap() - 0.5).abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for order in [1, 2, 7] {
            let q = QuadratureRule::new(2, order).unwrap();
            for _ in 0..100 {
                let p: [[f64; 2]; 3] = std::array::from_fn(|_| [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]);
                let s = GeodesicSimplex::new(E2, p.iter().map(|v| tr(v)).collect()).unwrap();
                assert!((integrate_form(&area, &s, &q).unwrap() - shoelace(&p)).abs() < 1e-12);
            }
        }

        // Gram determinant in R^3 and R^4
        for n in [3usize, 4] {
            let model = SymmetricSpaceModel::Euclidean(n);
            let vol = InvariantForm::euclidean_volume(n);
            let q = QuadratureRule::new(n, 1).unwrap();
            let verts: Vec<Vec<f64>> = (0..=n).map(|_| (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
            let m = nalgebra::DMatrix::from_fn(n, n, |r, c| verts[c + 1][r] - verts[0][r]);
            let fact: f64 = (1..=n).map(|i| i as f64).product();
            let s = GeodesicSimplex::new(model, verts.iter().map(|v| tr(v)).collect()).unwrap();
            assert!((integrate_form(&vol, &s, &q).unwrap() - m.determinant() / fact).abs() < 1e-12);
        }
    }

    #[test]
    fn hyperbolic_area_matches_angle_defect() {
        let area = InvariantForm::hyperbolic_area();
        let q = QuadratureRule::new(2, 64).unwrap();
        let z = [Complex64::new(0.0, 1.0), Complex64::new(1.0, 1.0), Complex64::new(-1.0, 1.0)];
        let s = GeodesicSimplex::new(H, z.iter().map(|&w| to(w)).collect()).unwrap();
        let a = integrate_form(&area, &s, &q).unwrap();
        assert!((a - gauss_bonnet(z)).abs() < 1e-6 && a.abs() < PI);

        let z = [Complex64::new(0.0, 1.0), Complex64::new(0.0, 2.0), Complex64::new(1.0, 1.0)];
        let s = GeodesicSimplex::new(H, z.iter().map(|&w| to(w)).collect()).unwrap();
        let v = simplex_volume(&s, &q).unwrap();
        assert!((v - gauss_bonnet(z).abs()).abs() < 1e-6);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let verts: Vec<_> = (0..3).map(|_| H.sample_ball(5.0, &mut rng)).collect();
            let s = GeodesicSimplex::new(H, verts).unwrap();
            let zs: Vec<_> = s.vertex_points().iter().map(|p| p.as_complex().unwrap()).collect();
            let a = integrate_form(&area, &s, &q).unwrap();
            let gb = gauss_bonnet([zs[0], zs[1], zs[2]]);
            assert!((a - gb).abs() < 1e-6, "{a} vs {gb} at {zs:?}");
        }
    }

    #[test]
    fn integrals_are_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let q = QuadratureRule::new(2, 20).unwrap();
        for model in [E2, H] {
            let form = model.volume_form();
            for _ in 0..30 {
                let s = GeodesicSimplex::new(model, (0..3).map(|_| model.sample_ball(3.0, &mut rng)).collect()).unwrap();
                let g = model.sample_ball(3.0, &mut rng);
                let a = integrate_form(&form, &s, &q).unwrap();
                let b = integrate_form(&form, &s.translate(&g), &q).unwrap();
                assert!((a - b).abs() < 1e-8, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn doubling_order_stays_within_estimate() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let area = InvariantForm::hyperbolic_area();
        for _ in 0..20 {
            let s = GeodesicSimplex::new(H, (0..3).map(|_| H.sample_ball(4.0, &mut rng)).collect()).unwrap();
            for order in [8, 16] {
                let q = QuadratureRule::new(2, order).unwrap();
                let (v, est) = integrate_form_with_estimate(&area, &s, &q).unwrap();
                let fine = integrate_form(&area, &s, &QuadratureRule::new(2, 2 * order).unwrap()).unwrap();
                assert!((fine - v).abs() < 10.0 * est, "order {order}: {v} {fine} {est}");
            }
        }
    }

    #[test]
    fn degree_mismatch_is_rejected() {
        let s = GeodesicSimplex::new(E2, vec![tr(&[0.0, 0.0]), tr(&[1.0, 0.0])]).unwrap();
        let q = QuadratureRule::new(1, 2).unwrap();
        assert!(integrate_form(&InvariantForm::euclidean_volume(2), &s, &q).is_err());
        assert!(simplex_volume(&s, &q).is_err());
        assert!(GeodesicSimplex::new(E2, vec![]).is_err());
        assert!(GeodesicSimplex::new(H, vec![tr(&[0.0, 0.0])]).is_err());
    }
}

//! Homogeneous group cochains, the coboundary, the J-map from invariant
//! forms, cyclic symmetrization, the van Est map and growth profiling.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::geom::{FormTag, GroupElement, InvariantForm, Point, SymmetricSpaceModel, TangentVector};
use crate::proper::Cutoff;
use crate::simplex::{gauss_legendre, integrate_on_points, ChartOptions, QuadratureRule, MAX_DEGREE};

pub type CochainFn = dyn Fn(&[GroupElement]) -> f64 + Send + Sync;

/// A smooth cochain `c(g_0, ..., g_k)` on `G`.
#[derive(Clone)]
pub struct GroupCochain {
    degree: usize,
    model: SymmetricSpaceModel,
    homogeneous: bool,
    eval: Arc<CochainFn>,
}

impl fmt::Debug for GroupCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupCochain")
            .field("degree", &self.degree)
            .field("model", &self.model)
            .field("homogeneous", &self.homogeneous)
            .finish()
    }
}

impl GroupCochain {
    pub fn new<F>(degree: usize, model: SymmetricSpaceModel, homogeneous: bool, f: F) -> Self
    where
        F: Fn(&[GroupElement]) -> f64 + Send + Sync + 'static,
    {
        Self {
            degree,
            model,
            homogeneous,
            eval: Arc::new(f),
        }
    }

    pub fn constant(degree: usize, model: SymmetricSpaceModel, value: f64) -> Self {
        Self::new(degree, model, true, move |_| value)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn model(&self) -> SymmetricSpaceModel {
        self.model
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn evaluate(&self, g: &[GroupElement]) -> Result<f64> {
        if g.len() != self.degree + 1 {
            return Err(Error::InvalidArgument(format!(
                "a {}-cochain takes {} arguments, got {}",
                self.degree,
                self.degree + 1,
                g.len()
            )));
        }
        Ok((self.eval)(g))
    }

    /// Evaluation without the arity check.
    #[inline]
    pub fn call(&self, g: &[GroupElement]) -> f64 {
        (self.eval)(g)
    }

    pub fn scale(&self, s: f64) -> Self {
        let f = self.eval.clone();
        Self::new(self.degree, self.model, self.homogeneous, move |g| s * f(g))
    }

    pub fn add(&self, o: &GroupCochain) -> Result<Self> {
        if o.degree != self.degree || o.model != self.model {
            return Err(Error::InvalidArgument("cochains differ in degree or model".into()));
        }
        let (f, h) = (self.eval.clone(), o.eval.clone());
        Ok(Self::new(self.degree, self.model, self.homogeneous && o.homogeneous, move |g| f(g) + h(g)))
    }

    /// `(t c)(g_0, ..., g_k) = c(g_k, g_0, ..., g_{k-1})`.
    pub fn rotate(&self) -> Self {
        let f = self.eval.clone();
        Self::new(self.degree, self.model, self.homogeneous, move |g| {
            let mut r = g.to_vec();
            r.rotate_right(1);
            f(&r)
        })
    }

    /// Largest `|c(h g_0, ..., h g_k) - c(g_0, ..., g_k)|` over random samples.
    pub fn homogeneity_defect(&self, samples: usize, radius: f64, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = self.model;
        (0..samples)
            .map(|_| {
                let g: Vec<_> = (0..=self.degree).map(|_| m.sample_ball(radius, &mut rng)).collect();
                let h = m.sample_ball(radius, &mut rng);
                let hg: Vec<_> = g.iter().map(|x| m.compose(&h, x)).collect();
                (self.call(&hg) - self.call(&g)).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `(delta c)(g_0, ..., g_{k+1}) = sum_i (-1)^i c(..., g_i omitted, ...)`.
pub fn delta(c: &GroupCochain) -> GroupCochain {
    let f = c.eval.clone();
    GroupCochain::new(c.degree + 1, c.model, c.homogeneous, move |g| {
        let mut face: SmallVec<[GroupElement; MAX_DEGREE + 2]> = SmallVec::new();
        let mut total = 0.0;
        for i in 0..g.len() {
            face.clear();
            face.extend(g.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()));
            let v = f(&face);
            total += if i % 2 == 0 { v } else { -v };
        }
        total
    })
}

/// `J(alpha)(g_0, ..., g_k)`: the integral of `alpha` over the geodesic
/// simplex spanned by `g_0 K, ..., g_k K`.
pub fn j_map(alpha: &InvariantForm, model: SymmetricSpaceModel, q: &QuadratureRule) -> Result<GroupCochain> {
    let k = alpha.degree();
    if k > MAX_DEGREE || q.dim() != k {
        return Err(Error::InvalidArgument(format!(
            "form degree {k} needs a quadrature rule on the {k}-simplex, got dimension {}",
            q.dim()
        )));
    }
    if let (SymmetricSpaceModel::Euclidean(n), FormTag::EuclideanBasis(..) | FormTag::EuclideanVolume(_)) =
        (model, alpha.tag())
    {
        // constant coefficients on an affine simplex: det of the edge minor over k!
        let idx: Vec<usize> = match alpha.tag() {
            FormTag::EuclideanBasis(_, idx) => idx.clone(),
            _ => (0..n).collect(),
        };
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        return Ok(GroupCochain::new(k, model, true, move |g| {
            let v0 = g[0].as_translation().expect("euclidean element");
            let mut m = [[0.0f64; MAX_DEGREE]; MAX_DEGREE];
            for (col, gi) in g[1..].iter().enumerate() {
                let vi = gi.as_translation().expect("euclidean element");
                for (row, &r) in idx.iter().enumerate() {
                    m[row][col] = vi[r] - v0[r];
                }
            }
            small_det(&mut m, k) / fact
        }));
    }
    let alpha = alpha.clone();
    let q = q.clone();
    let opts = ChartOptions::default();
    Ok(GroupCochain::new(k, model, true, move |g| {
        let pts: Vec<Point> = g.iter().map(|x| model.orbit_point(x)).collect();
        integrate_on_points(&model, &alpha, &pts, &q, &opts).expect("degrees checked at construction")
    }))
}

/// Determinant of the leading `k x k` block by partial pivoting.
fn small_det(m: &mut [[f64; MAX_DEGREE]; MAX_DEGREE], k: usize) -> f64 {
    match k {
        0 => return 1.0,
        1 => return m[0][0],
        2 => return m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {}
    }
    let mut det = 1.0;
    for c in 0..k {
        let p = (c..k).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..k {
            let f = m[r][c] / m[c][c];
            for j in c..k {
                m[r][j] -= f * m[c][j];
            }
        }
    }
    det
}

/// `c_lambda = 1/(k+1) sum_j (-1)^{kj} t^j c`.
pub fn cyclic_symmetrize(c: &GroupCochain) -> GroupCochain {
    let f = c.eval.clone();
    let k = c.degree;
    GroupCochain::new(k, c.model, c.homogeneous, move |g| {
        let mut r: SmallVec<[GroupElement; MAX_DEGREE + 2]> = SmallVec::from(g);
        let mut total = 0.0;
        for j in 0..=k {
            let v = f(&r);
            total += if (k * j) % 2 == 0 { v } else { -v };
            r.rotate_right(1);
        }
        total / (k + 1) as f64
    })
}

/// Parameters for the van Est evaluation.
#[derive(Clone, Debug)]
pub struct VanEstOptions {
    /// Gauss-Legendre points per group coordinate.
    pub order: usize,
    /// Difference step; `None` means `1e-4 (1 + |x|)`.
    pub step: Option<f64>,
    pub richardson: bool,
    /// Integration box `(center, sup-radius)`; `None` means the support of chi.
    pub domain: Option<(Vec<f64>, f64)>,
}

impl Default for VanEstOptions {
    fn default() -> Self {
        Self {
            order: 14,
            step: None,
            richardson: false,
            domain: None,
        }
    }
}

/// `omega^chi_c(x)(v_1, ..., v_k)` for `G = R^n` acting on `M = G x S`, with
/// `x = (x_g, s)` and tangent vectors along `G`.
///
/// Substituting `y_i = g_i^{-1} x_i` the integrand is
/// `prod chi(y_i) c(x_0 - y_0, ..., x_k - y_k)`, so the derivatives in the
/// slots `1..k` act on `c` alone.
pub fn vanest_form(
    c: &GroupCochain,
    chi: &Cutoff,
    x_g: &[f64],
    s: usize,
    v: &[TangentVector],
    opts: &VanEstOptions,
) -> Result<f64> {
    let n = chi.action().group_dim();
    let k = c.degree();
    if c.model() != SymmetricSpaceModel::Euclidean(n) {
        return Err(Error::ModelMismatch(format!("van Est needs a cochain on R^{n}, got {}", c.model())));
    }
    if v.len() != k || x_g.len() != n || s >= chi.action().slice().len() {
        return Err(Error::InvalidArgument(format!("{k}-cochain evaluated on {} vectors", v.len())));
    }
    let dirs: Vec<Vec<f64>> = v
        .iter()
        .map(|t| match t {
            TangentVector::Euclidean(c) if c.len() == n => Ok(c.to_vec()),
            _ => Err(Error::ModelMismatch("tangent vectors must lie along R^n".into())),
        })
        .collect::<Result<_>>()?;
    let (sc, sr) = chi.support();
    let (center, radius) = match &opts.domain {
        None => (sc.to_vec(), sr),
        Some((c, r)) => {
            if (0..n).any(|i| (sc[i] - sr) < c[i] - r - 1e-12 || sc[i] + sr > c[i] + r + 1e-12) {
                return Err(Error::Truncation(format!(
                    "box {c:?} +- {r} misses the support {sc:?} +- {sr}"
                )));
            }
            (c.clone(), *r)
        }
    };

    // tensor Gauss-Legendre grid on the box, weighted by chi
    let (u, w) = gauss_legendre(opts.order.max(1));
    let mut grid: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let y: Vec<f64> = (0..n).map(|i| center[i] - radius + 2.0 * radius * u[idx[i]]).collect();
        let weight: f64 = (0..n).map(|i| 2.0 * radius * w[idx[i]]).product::<f64>() * chi.eval(&y, s);
        if weight != 0.0 {
            grid.push((y, weight));
        }
        let mut i = 0;
        while i < n {
            idx[i] += 1;
            if idx[i] < u.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }

    let norm_x = x_g.iter().map(|a| a * a).sum::<f64>().sqrt();
    let h = opts.step.unwrap_or(1e-4 * (1.0 + norm_x));
    let perms = permutations(k);
    // pair each even permutation with its composite by the swap of the
    // first two slots, so exchanging v_1 and v_2 negates the sum exactly
    let pairs: Vec<(Vec<usize>, Option<Vec<usize>>)> = perms
        .iter()
        .filter(|(_, s)| *s > 0.0)
        .map(|(p, _)| {
            let partner = (k >= 2).then(|| p.iter().map(|&i| if i < 2 { 1 - i } else { i }).collect());
            (p.clone(), partner)
        })
        .collect();
    let mixed = |ys: &[&[f64]], h: f64, perm: &[usize], args: &mut Vec<GroupElement>| -> f64 {
        let mut total = 0.0;
        for eps in 0..(1usize << k) {
            args.clear();
            let mut coef = 1.0;
            for slot in 0..=k {
                let mut g: Vec<f64> = (0..n).map(|i| x_g[i] - ys[slot][i]).collect();
                if slot > 0 {
                    let e = if eps >> (slot - 1) & 1 == 0 { 1.0 } else { -1.0 };
                    coef *= e;
                    let d = &dirs[perm[slot - 1]];
                    g.iter_mut().zip(d).for_each(|(a, b)| *a += e * h * b);
                }
                args.push(GroupElement::translation(&g));
            }
            total += coef * c.call(args);
        }
        total
    };
    let integrand = |ys: &[&[f64]], h: f64| -> f64 {
        let mut args: Vec<GroupElement> = Vec::with_capacity(k + 1);
        let mut total = 0.0;
        for (p, partner) in &pairs {
            let a = mixed(ys, h, p, &mut args);
            let b = partner.as_ref().map_or(0.0, |q| mixed(ys, h, q, &mut args));
            total += a - b;
        }
        total / (2.0 * h).powi(k as i32)
    };
    let integrate = |h: f64| -> f64 {
        let p = grid.len();
        let partial: Vec<f64> = (0..p)
            .into_par_iter()
            .map(|i0| {
                let mut sum = 0.0;
                let mut rest = vec![0usize; k];
                loop {
                    let mut weight = grid[i0].1;
                    let mut ys: Vec<&[f64]> = vec![&grid[i0].0];
                    for &r in &rest {
                        weight *= grid[r].1;
                        ys.push(&grid[r].0);
                    }
                    sum += weight * integrand(&ys, h);
                    let mut j = 0;
                    while j < k {
                        rest[j] += 1;
                        if rest[j] < p {
                            break;
                        }
                        rest[j] = 0;
                        j += 1;
                    }
                    if j == k {
                        break;
                    }
                }
                sum
            })
            .collect();
        partial.iter().sum()
    };
    let d = integrate(h);
    Ok(if opts.richardson && k > 0 {
        (4.0 * integrate(h / 2.0) - d) / 3.0
    } else {
        d
    })
}

/// All permutations of `0..k` with their signs.
fn permutations(k: usize) -> Vec<(Vec<usize>, f64)> {
    if k == 0 {
        return vec![(vec![], 1.0)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            // inserting at `pos` passes over `len - pos` larger positions
            let sign = if (p.len() - pos) % 2 == 0 { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

/// Maximal values of a cochain on distance shells.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub radii: Vec<f64>,
    pub max_abs: Vec<f64>,
    /// `max |c| / prod (1 + d(g_i))^k` per radius.
    pub ratios: Vec<f64>,
    /// Least-squares slope of `log max|c|` against `log prod (1 + d(g_i))`.
    pub exponent: f64,
}

impl GrowthReport {
    pub fn median_ratio(&self) -> f64 {
        let mut r = self.ratios.clone();
        r.sort_by(f64::total_cmp);
        let m = r.len();
        if m % 2 == 1 {
            r[m / 2]
        } else {
            0.5 * (r[m / 2 - 1] + r[m / 2])
        }
    }

    /// The last ratio stays within twice the median.
    pub fn is_bounded(&self) -> bool {
        self.ratios.iter().all(|r| r.is_finite()) && self.ratios.last().is_some_and(|&r| r <= 2.0 * self.median_ratio())
    }
}

/// Samples every argument on the shell `d(g_i) = R` for each radius.
pub fn growth_profile(c: &GroupCochain, radii: &[f64], samples: usize, seed: u64) -> Result<GrowthReport> {
    if radii.is_empty() || samples == 0 {
        return Err(Error::InvalidArgument("growth profile needs radii and samples".into()));
    }
    let k = c.degree();
    let m = c.model();
    let max_abs: Vec<f64> = radii
        .par_iter()
        .enumerate()
        .map(|(i, &r)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut best = 0.0f64;
            for _ in 0..samples {
                let g: Vec<_> = (0..=k).map(|_| m.sample_shell(r, &mut rng)).collect();
                best = best.max(c.call(&g).abs());
            }
            best
        })
        .collect();
    let logp: Vec<f64> = radii.iter().map(|r| (k + 1) as f64 * (1.0 + r).ln()).collect();
    let ratios = max_abs
        .iter()
        .zip(&logp)
        .map(|(v, lp)| v / (lp * k as f64).exp())
        .collect();
    let exponent = fit_slope(&logp, &max_abs.iter().map(|v| v.max(1e-300).ln()).collect::<Vec<_>>());
    Ok(GrowthReport {
        radii: radii.to_vec(),
        max_abs,
        ratios,
        exponent,
    })
}

fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return 0.0;
    }
    x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / sxx
}

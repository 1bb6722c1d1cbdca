//! Cut-off functions for the translation action of `G = R^n` on
//! `M = G x S`, where the slice `S` is a finite weighted sample.
//!
//! Group integrals are lattice sums with spacing `h_G`. The normalizer of a
//! cut-off is itself a lattice sum, so `sum_y h_G^n chi(y, s) = 1` holds to
//! rounding on the lattice and to trapezoid accuracy off it.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// A finite sample of a compact slice: points with positive weights.
#[derive(Clone, Debug)]
pub struct Slice {
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl Slice {
    pub fn new(points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidArgument("slice needs as many weights as points, at least one".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0)) {
            return Err(Error::InvalidArgument(format!("slice weight {w} is not positive")));
        }
        let d = points[0].len();
        if points.iter().any(|p| p.len() != d) {
            return Err(Error::InvalidArgument("slice points differ in dimension".into()));
        }
        Ok(Self { points, weights })
    }

    /// The one-point slice of volume 1.
    pub fn point() -> Self {
        Self::new(vec![vec![]], vec![1.0]).unwrap()
    }

    /// `m` equally spaced angles on a circle of circumference `length`.
    pub fn circle(m: usize, length: f64) -> Result<Self> {
        if m == 0 || !(length > 0.0) {
            return Err(Error::InvalidArgument("circle needs points and a positive length".into()));
        }
        let w = length / m as f64;
        Ok(Self::new((0..m).map(|i| vec![i as f64 * w]).collect(), vec![w; m]).unwrap())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn volume(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// `G = R^n` acting by translation on `M = G x S`.
#[derive(Clone, Debug)]
pub struct ProperActionData {
    n: usize,
    spacing: f64,
    slice: Slice,
}

impl ProperActionData {
    pub fn new(n: usize, spacing: f64, slice: Slice) -> Result<Self> {
        if n == 0 || n > 4 {
            return Err(Error::InvalidArgument(format!("group dimension {n} outside 1..=4")));
        }
        if !(spacing > 0.0) {
            return Err(Error::InvalidArgument(format!("lattice spacing {spacing} is not positive")));
        }
        Ok(Self { n, spacing, slice })
    }

    pub fn group_dim(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn slice(&self) -> &Slice {
        &self.slice
    }

    /// Haar weight of one lattice cell.
    pub fn cell(&self) -> f64 {
        self.spacing.powi(self.n as i32)
    }

    /// Lattice points `offset + h m` inside the box `center +- radius`.
    pub fn lattice_in_box(&self, offset: &[f64], center: &[f64], radius: f64) -> Vec<Vec<f64>> {
        let h = self.spacing;
        let ranges: Vec<(i64, i64)> = (0..self.n)
            .map(|i| {
                let lo = ((center[i] - radius - offset[i]) / h - 1e-9).ceil() as i64;
                let hi = ((center[i] + radius - offset[i]) / h + 1e-9).floor() as i64;
                (lo, hi)
            })
            .collect();
        let mut out = Vec::new();
        let mut m: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        if ranges.iter().any(|r| r.0 > r.1) {
            return out;
        }
        loop {
            out.push((0..self.n).map(|i| offset[i] + h * m[i] as f64).collect());
            let mut i = 0;
            loop {
                if i == self.n {
                    return out;
                }
                m[i] += 1;
                if m[i] <= ranges[i].1 {
                    break;
                }
                m[i] = ranges[i].0;
                i += 1;
            }
        }
    }
}

pub type BumpFn = dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync;

/// A nonnegative function on `M`, compactly supported along `G` in the box
/// `center +- radius` (sup norm).
#[derive(Clone)]
pub struct Bump {
    f: Arc<BumpFn>,
    center: Vec<f64>,
    radius: f64,
}

impl std::fmt::Debug for Bump {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Bump").field("center", &self.center).field("radius", &self.radius).finish()
    }
}

/// `exp(1 - 1/(1 - r^2))` for `r < 1`, else 0; equal to 1 at the origin.
pub fn standard_bump(r: f64) -> f64 {
    if r.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - r * r)).exp()
    }
}

impl Bump {
    pub fn new<F>(center: Vec<f64>, radius: f64, f: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            f: Arc::new(f),
            center,
            radius,
        }
    }

    /// `b(|g| / eps)` with the standard bump, independent of the slice.
    pub fn radial(n: usize, eps: f64) -> Self {
        Self::new(vec![0.0; n], eps, move |g, _| {
            let r = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            standard_bump(r / eps)
        })
    }

    /// The same bump moved by `a` along `G`.
    pub fn translate(&self, a: &[f64]) -> Self {
        let f = self.f.clone();
        let a = a.to_vec();
        let center = self.center.iter().zip(&a).map(|(c, x)| c + x).collect();
        Self {
            f: Arc::new(move |g: &[f64], s: &[f64]| {
                let shifted: Vec<f64> = g.iter().zip(&a).map(|(x, y)| x - y).collect();
                f(&shifted, s)
            }),
            center,
            radius: self.radius,
        }
    }

    pub fn eval(&self, g: &[f64], s: &[f64]) -> f64 {
        (self.f)(g, s)
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// A cut-off function `chi = h / int_G h(g^{-1} x) dg`.
#[derive(Clone, Debug)]
pub struct Cutoff {
    action: Arc<ProperActionData>,
    bump: Bump,
    norms: Vec<f64>,
}

/// Builds the cut-off from `h`; the normalizer is evaluated per slice point.
pub fn make_cutoff(h: Bump, action: &ProperActionData) -> Result<Cutoff> {
    if h.center.len() != action.n {
        return Err(Error::InvalidArgument(format!(
            "bump lives on R^{} but the group is R^{}",
            h.center.len(),
            action.n
        )));
    }
    let zero = vec![0.0; action.n];
    let grid = action.lattice_in_box(&zero, &h.center, h.radius);
    let cell = action.cell();
    let norms: Vec<f64> = action
        .slice
        .points
        .iter()
        .map(|s| grid.iter().map(|y| h.eval(y, s)).sum::<f64>() * cell)
        .collect();
    if let Some(&bad) = norms.iter().find(|&&v| !(v >= 1e-12)) {
        return Err(Error::ZeroDenominator(bad));
    }
    Ok(Cutoff {
        action: Arc::new(action.clone()),
        bump: h,
        norms,
    })
}

/// The cut-off built from the radial bump of width `eps`.
pub fn cutoff_family(eps: f64, action: &ProperActionData) -> Result<Cutoff> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps = {eps} must be positive")));
    }
    make_cutoff(Bump::radial(action.n, eps), action)
}

/// The slice cut-off `delta_0 / h_G^n`, the limit of the family as `eps -> 0`
/// on the lattice.
pub fn slice_cutoff(action: &ProperActionData) -> Cutoff {
    let half = 0.5 * action.spacing;
    let h = Bump::new(vec![0.0; action.n], half, move |g, _| {
        if g.iter().all(|x| x.abs() < half) {
            1.0
        } else {
            0.0
        }
    });
    make_cutoff(h, action).expect("the origin is a lattice point")
}

impl Cutoff {
    pub fn action(&self) -> &ProperActionData {
        &self.action
    }

    pub fn bump(&self) -> &Bump {
        &self.bump
    }

    /// `chi(g, s_j)` for slice index `j`.
    pub fn eval(&self, g: &[f64], s: usize) -> f64 {
        self.bump.eval(g, &self.action.slice.points[s]) / self.norms[s]
    }

    /// Support box along `G` as (center, sup-radius).
    pub fn support(&self) -> (&[f64], f64) {
        (&self.bump.center, self.bump.radius)
    }

    /// `int_G chi(g^{-1} x) dg` at `x = (x_g, s)`, summed on the lattice
    /// through `x_g`.
    pub fn group_integral(&self, x_g: &[f64], s: usize) -> f64 {
        let grid = self.action.lattice_in_box(x_g, &self.bump.center, self.bump.radius);
        grid.iter().map(|z| self.eval(z, s)).sum::<f64>() * self.action.cell()
    }

    /// `int_M chi f` over `supp chi x S`.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(&[f64], &[f64]) -> f64 + Sync,
    {
        let a = &self.action;
        let zero = vec![0.0; a.n];
        let grid = a.lattice_in_box(&zero, &self.bump.center, self.bump.radius);
        let per_slice: Vec<f64> = (0..a.slice.len())
            .into_par_iter()
            .map(|j| {
                let s = &a.slice.points[j];
                grid.iter().map(|y| self.eval(y, j) * f(y, s)).sum::<f64>()
            })
            .collect();
        per_slice.iter().zip(&a.slice.weights).map(|(v, w)| v * w).sum::<f64>() * a.cell()
    }
}

/// `int_M chi . density` for a `G`-invariant density on `M`.
pub fn invariant_integral<F>(density: F, chi: &Cutoff) -> f64
where
    F: Fn(&[f64], &[f64]) -> f64 + Sync,
{
    chi.integrate(density)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(spacing: f64) -> ProperActionData {
        ProperActionData::new(1, spacing, Slice::point()).unwrap()
    }

    #[test]
    fn triangle_bump_normalizes() {
        let a = line(0.01);
        let h = Bump::new(vec![0.0], 1.0, |g, _| (1.0 - g[0].abs()).max(0.0));
        let chi = make_cutoff(h, &a).unwrap();
        for x in [-1.0, 0.0, 1.0, 0.37] {
            assert!((chi.group_integral(&[x], 0) - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn normalized_bump_is_unchanged() {
        let a = line(0.25);
        // the unit indicator of [0, 1) sums to one on any shifted lattice of spacing 1/4
        let h = Bump::new(vec![0.5], 0.5, |g, _| if (0.0..1.0).contains(&g[0]) { 1.0 } else { 0.0 });
        let chi = make_cutoff(h.clone(), &a).unwrap();
        for g in [-0.5, 0.0, 0.3, 0.75, 1.2] {
            assert_eq!(chi.eval(&[g], 0), h.eval(&[g], &[]));
        }
    }

    #[test]
    fn smooth_cutoff_normalizes_off_lattice() {
        let a = ProperActionData::new(2, 0.02, Slice::circle(3, 1.0).unwrap()).unwrap();
        let chi = cutoff_family(1.0, &a).unwrap();
        for i in 0..20 {
            let x = [0.013 * i as f64 - 0.1, 0.031 * i as f64];
            for s in 0..3 {
                let v = chi.group_integral(&x, s);
                assert!((v - 1.0).abs() < 1e-6, "{v}");
            }
        }
    }

    #[test]
    fn invariant_integrals_do_not_depend_on_the_cutoff() {
        let a = ProperActionData::new(1, 0.01, Slice::circle(8, 2.0).unwrap()).unwrap();
        let density = |_: &[f64], s: &[f64]| 1.0 + (std::f64::consts::PI * s[0]).cos().powi(2);
        let c1 = cutoff_family(0.5, &a).unwrap();
        let c2 = make_cutoff(Bump::radial(1, 1.3).translate(&[0.4]), &a).unwrap();
        let v1 = invariant_integral(density, &c1);
        let v2 = invariant_integral(density, &c2);
        assert!((v1 - 3.0).abs() < 1e-9 && (v1 - v2).abs() < 1e-9);
        assert_eq!(invariant_integral(|_, _| 0.0, &c1), 0.0);
    }

    #[test]
    fn family_converges_to_slice_integral() {
        let a = line(0.002);
        let f = |g: &[f64], _: &[f64]| (g[0] + 0.3).cos();
        let limit = 0.3f64.cos();
        let errs: Vec<f64> = [0.4, 0.2, 0.1]
            .iter()
            .map(|&e| (cutoff_family(e, &a).unwrap().integrate(f) - limit).abs())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2]);
        assert!((errs[0] / errs[2]).log2() / 2.0 > 0.9);
    }

    #[test]
    fn slice_cutoff_is_a_lattice_delta() {
        let a = ProperActionData::new(2, 0.25, Slice::point()).unwrap();
        let chi = slice_cutoff(&a);
        assert_eq!(chi.eval(&[0.0, 0.0], 0), 16.0);
        assert_eq!(chi.eval(&[0.25, 0.0], 0), 0.0);
        assert!((chi.group_integral(&[0.5, -0.75], 0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_input_is_rejected() {
        let a = line(0.5);
        let h = Bump::new(vec![0.0], 0.1, |_, _| 0.0);
        assert!(matches!(make_cutoff(h, &a), Err(Error::ZeroDenominator(_))));
        assert!(cutoff_family(0.0, &a).is_err());
        assert!(Slice::new(vec![vec![0.0]], vec![-1.0]).is_err());
        assert!(Slice::new(vec![], vec![]).is_err());
    }
}

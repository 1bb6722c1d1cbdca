//! The convolution algebra of a lattice in `R^n`, its Plancherel trace, the
//! rapid-decay seminorms and the cyclic cochains `tau^G_c`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::geom::{GroupElement, SymmetricSpaceModel};
use crate::groupcoh::GroupCochain;

/// The lattice `h_G Z^n` truncated to the box `|m_i| <= radius`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeGroup {
    n: usize,
    spacing: f64,
    radius: i64,
}

impl LatticeGroup {
    pub fn new(n: usize, spacing: f64, radius: i64) -> Result<Self> {
        if n == 0 || n > 4 {
            return Err(Error::InvalidArgument(format!("lattice dimension {n} outside 1..=4")));
        }
        if !(spacing > 0.0) || radius < 0 {
            return Err(Error::InvalidArgument(format!("spacing {spacing}, radius {radius}")));
        }
        Ok(Self { n, spacing, radius })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    /// Sites per axis.
    pub fn width(&self) -> usize {
        (2 * self.radius + 1) as usize
    }

    pub fn len(&self) -> usize {
        self.width().pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Haar weight `h_G^n` of a site.
    pub fn cell(&self) -> f64 {
        self.spacing.powi(self.n as i32)
    }

    pub fn index(&self, m: &[i64]) -> Option<usize> {
        let w = self.width() as i64;
        let mut idx = 0i64;
        for &mi in m.iter().rev() {
            if mi.abs() > self.radius {
                return None;
            }
            idx = idx * w + mi + self.radius;
        }
        Some(idx as usize)
    }

    pub fn site(&self, idx: usize) -> [i64; 4] {
        let w = self.width();
        let mut m = [0i64; 4];
        let mut r = idx;
        for mi in m.iter_mut().take(self.n) {
            *mi = (r % w) as i64 - self.radius;
            r /= w;
        }
        m
    }

    /// Coordinates `h_G m` of a site.
    pub fn point(&self, m: &[i64]) -> Vec<f64> {
        m[..self.n].iter().map(|&x| x as f64 * self.spacing).collect()
    }

    pub fn element(&self, m: &[i64]) -> GroupElement {
        GroupElement::Euclidean(m[..self.n].iter().map(|&x| x as f64 * self.spacing).collect())
    }
}

/// A finitely supported function on the lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvElement {
    lattice: LatticeGroup,
    values: Vec<f64>,
}

impl ConvElement {
    pub fn zero(lattice: LatticeGroup) -> Self {
        Self {
            lattice,
            values: vec![0.0; lattice.len()],
        }
    }

    /// `value` at the site `m`.
    pub fn delta(lattice: LatticeGroup, m: &[i64], value: f64) -> Result<Self> {
        let mut a = Self::zero(lattice);
        a.set(m, value)?;
        Ok(a)
    }

    /// The unit `delta_0 / h_G^n`.
    pub fn unit(lattice: LatticeGroup) -> Self {
        Self::delta(lattice, &[0; 4][..lattice.n], 1.0 / lattice.cell()).unwrap()
    }

    /// Samples `f` at every site of the box.
    pub fn from_fn<F: Fn(&[f64]) -> f64>(lattice: LatticeGroup, f: F) -> Self {
        let values = (0..lattice.len()).map(|i| f(&lattice.point(&lattice.site(i)))).collect();
        Self { lattice, values }
    }

    pub fn from_values(lattice: LatticeGroup, values: Vec<f64>) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(Error::InvalidArgument(format!("{} values for {} sites", values.len(), lattice.len())));
        }
        Ok(Self { lattice, values })
    }

    /// Random values at `sites` random sites of the box.
    pub fn random_sparse<R: Rng + ?Sized>(lattice: LatticeGroup, sites: usize, rng: &mut R) -> Self {
        let mut a = Self::zero(lattice);
        for _ in 0..sites {
            let i = rng.gen_range(0..lattice.len());
            a.values[i] += rng.gen_range(-1.0..1.0);
        }
        a
    }

    pub fn lattice(&self) -> LatticeGroup {
        self.lattice
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, m: &[i64]) -> f64 {
        self.lattice.index(m).map_or(0.0, |i| self.values[i])
    }

    pub fn set(&mut self, m: &[i64], value: f64) -> Result<()> {
        let i = self.lattice.index(m).ok_or_else(|| Error::BoxOverflow(m.to_vec()))?;
        self.values[i] = value;
        Ok(())
    }

    /// Nonzero sites with their values.
    pub fn support(&self) -> Vec<([i64; 4], f64)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (self.lattice.site(i), *v))
            .collect()
    }

    fn check(&self, o: &ConvElement) -> Result<()> {
        if self.lattice != o.lattice {
            return Err(Error::LatticeMismatch(format!("{:?} vs {:?}", self.lattice, o.lattice)));
        }
        Ok(())
    }

    pub fn add(&self, o: &ConvElement) -> Result<Self> {
        self.check(o)?;
        let values = self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect();
        Ok(Self { lattice: self.lattice, values })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            lattice: self.lattice,
            values: self.values.iter().map(|a| s * a).collect(),
        }
    }

    /// `sup |a|`.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `a*(g) = a(-g)`.
    pub fn reflect(&self) -> Self {
        let l = self.lattice;
        let values = (0..l.len())
            .map(|i| {
                let mut m = l.site(i);
                m.iter_mut().for_each(|x| *x = -*x);
                self.get(&m[..l.n])
            })
            .collect();
        Self { lattice: l, values }
    }
}

/// `(a * b)(g) = sum_{g'} a(g') b(g - g') h_G^n`.
pub fn convolve(a: &ConvElement, b: &ConvElement) -> Result<ConvElement> {
    a.check(b)?;
    let l = a.lattice;
    let cell = l.cell();
    let mut out = ConvElement::zero(l);
    let sb = b.support();
    for (ma, va) in a.support() {
        for (mb, vb) in &sb {
            let mut m = [0i64; 4];
            for i in 0..l.n {
                m[i] = ma[i] + mb[i];
            }
            let idx = l.index(&m[..l.n]).ok_or_else(|| Error::BoxOverflow(m[..l.n].to_vec()))?;
            out.values[idx] += va * vb * cell;
        }
    }
    Ok(out)
}

/// `tau(a) = a(0)`.
pub fn plancherel_trace(a: &ConvElement) -> f64 {
    a.get(&[0; 4][..a.lattice.n])
}

/// `nu_k(a) = (sum (1 + |g|)^{2k} |a(g)|^2 h_G^n)^{1/2}`.
pub fn seminorm(k: u32, a: &ConvElement) -> f64 {
    let l = a.lattice;
    let s: f64 = a
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(i, v)| {
            let len = l.point(&l.site(i)).iter().map(|x| x * x).sum::<f64>().sqrt();
            (1.0 + len).powi(2 * k as i32) * v * v
        })
        .sum();
    (s * l.cell()).sqrt()
}

/// `tau^G_c(a_0, ..., a_k)`: the sum over `(g_1, ..., g_k)` of
/// `c(e, g_1, g_1 + g_2, ...) a_0(-(g_1 + ... + g_k)) a_1(g_1) ... a_k(g_k) h^{nk}`.
///
/// Values of `a_0` outside the box are zero.
pub fn tau_g(c: &GroupCochain, a: &[ConvElement]) -> Result<f64> {
    let k = c.degree();
    if a.len() != k + 1 {
        return Err(Error::InvalidArgument(format!("tau of a {k}-cochain takes {} elements", k + 1)));
    }
    let l = a[0].lattice;
    for x in &a[1..] {
        a[0].check(x)?;
    }
    if c.model() != SymmetricSpaceModel::Euclidean(l.n) {
        return Err(Error::ModelMismatch(format!("cochain on {} paired with a lattice in R^{}", c.model(), l.n)));
    }
    let n = l.n;
    if k == 0 {
        return Ok(c.call(&[l.element(&[0; 4])]) * plancherel_trace(&a[0]));
    }
    let supports: Vec<Vec<([i64; 4], f64)>> = a[1..].iter().map(|x| x.support()).collect();
    if supports.iter().any(|s| s.is_empty()) {
        return Ok(0.0);
    }
    let weight = l.cell().powi(k as i32);
    let partial: Vec<f64> = supports[0]
        .par_iter()
        .map(|&(m1, v1)| {
            let mut idx = vec![0usize; k - 1];
            let mut args: Vec<GroupElement> = Vec::with_capacity(k + 1);
            let mut total = 0.0;
            let mut sites = [[0i64; 4]; 5];
            loop {
                let mut cum = m1;
                let mut prod = v1;
                sites[0] = cum;
                for (j, &i) in idx.iter().enumerate() {
                    let (m, v) = supports[j + 1][i];
                    for d in 0..n {
                        cum[d] += m[d];
                    }
                    prod *= v;
                    sites[j + 1] = cum;
                }
                let mut neg = [0i64; 4];
                for d in 0..n {
                    neg[d] = -cum[d];
                }
                let a0 = a[0].get(&neg[..n]);
                if a0 != 0.0 {
                    args.clear();
                    args.push(l.element(&[0; 4]));
                    args.extend(sites[..k].iter().map(|m| l.element(m)));
                    total += c.call(&args) * a0 * prod;
                }
                let mut j = 0;
                while j < k - 1 {
                    idx[j] += 1;
                    if idx[j] < supports[j + 1].len() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == k - 1 {
                    break;
                }
            }
            total
        })
        .collect();
    Ok(partial.iter().sum::<f64>() * weight)
}

/// The lattice value of `tau_omega` for the area cocycle and the spectral
/// value `-(1/(8 pi^2)) int hat a_0 d hat a_1 ^ d hat a_2`, with
/// `hat a(xi) = int a(x) e^{-i x xi} dx` computed on the box as a torus.
pub fn fourier_check(area: &GroupCochain, a: &[ConvElement; 3]) -> Result<(f64, f64)> {
    let l = a[0].lattice;
    if l.n != 2 {
        return Err(Error::InvalidArgument("the Fourier identity lives on R^2".into()));
    }
    let lattice_value = tau_g(area, a)?;

    let w = l.width();
    let h = l.spacing;
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(w);
    // wrapped layout: array index i <-> site i for i <= R, i - w otherwise
    let transform = |weight: &dyn Fn(&[i64]) -> f64, x: &ConvElement| -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); w * w];
        for (m, v) in x.support() {
            let i = m[0].rem_euclid(w as i64) as usize;
            let j = m[1].rem_euclid(w as i64) as usize;
            buf[i * w + j] = Complex64::new(v * weight(&m) * h * h, 0.0);
        }
        for row in buf.chunks_mut(w) {
            fft.process(row);
        }
        let mut col = vec![Complex64::new(0.0, 0.0); w];
        for j in 0..w {
            for i in 0..w {
                col[i] = buf[i * w + j];
            }
            fft.process(&mut col);
            for i in 0..w {
                buf[i * w + j] = col[i];
            }
        }
        buf
    };
    let minus_i = Complex64::new(0.0, -1.0);
    let f0 = transform(&|_| 1.0, &a[0]);
    let d = |x: &ConvElement, axis: usize| -> Vec<Complex64> {
        transform(&|m: &[i64]| m[axis] as f64 * h, x).into_iter().map(|z| z * minus_i).collect()
    };
    let (d1x, d1y, d2x, d2y) = (d(&a[1], 0), d(&a[1], 1), d(&a[2], 0), d(&a[2], 1));
    let dxi = (2.0 * PI / (w as f64 * h)).powi(2);
    let integral: Complex64 = (0..w * w)
        .map(|i| f0[i] * (d1x[i] * d2y[i] - d1y[i] * d2x[i]))
        .sum::<Complex64>()
        * dxi;
    Ok((lattice_value, -integral.re / (8.0 * PI * PI)))
}

/// `|tau_c(a_0, ..., a_k)| / prod nu_{p+k}(a_i)`.
pub fn continuity_ratio(c: &GroupCochain, a: &[ConvElement], p: u32) -> Result<f64> {
    let k = c.degree() as u32;
    let t = tau_g(c, a)?;
    let denom: f64 = a.iter().map(|x| seminorm(p + k, x)).product();
    Ok(if denom == 0.0 { 0.0 } else { t.abs() / denom })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::InvariantForm;
    use crate::groupcoh::{cyclic_symmetrize, j_map};
    use crate::simplex::QuadratureRule;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const E2: SymmetricSpaceModel = SymmetricSpaceModel::Euclidean(2);

    fn area() -> GroupCochain {
        cyclic_symmetrize(&j_map(&InvariantForm::euclidean_volume(2), E2, &QuadratureRule::new(2, 1).unwrap()).unwrap())
    }

    fn gaussian(l: LatticeGroup, mu: [f64; 2], s: f64, tilt: [f64; 2]) -> ConvElement {
        ConvElement::from_fn(l, |x| {
            let r2 = (x[0] - mu[0]).powi(2) + (x[1] - mu[1]).powi(2);
            (1.0 + tilt[0] * x[0] + tilt[1] * x[1]) * (-r2 / (2.0 * s * s)).exp()
        })
    }

    #[test]
    fn convolution_examples() {
        let l = LatticeGroup::new(1, 0.05, 400).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = ConvElement::random_sparse(l, 30, &mut rng);
        let u = ConvElement::unit(l);
        let ub = convolve(&u, &b).unwrap();
        assert!(ub.values().iter().zip(b.values()).all(|(x, y)| (x - y).abs() < 1e-12));
        assert_eq!(convolve(&b, &ConvElement::zero(l)).unwrap(), ConvElement::zero(l));

        let g = |s: f64| {
            ConvElement::from_fn(l, move |x| {
                let v = (-x[0] * x[0] / (2.0 * s * s)).exp() / (s * (2.0 * PI).sqrt());
                if v < 1e-300 { 0.0 } else { v }
            })
        };
        let (s1, s2) = (0.5, 0.8);
        let big = LatticeGroup::new(1, 0.05, 400).unwrap();
        let trimmed = |a: ConvElement| {
            ConvElement::from_fn(big, |x| if x[0].abs() <= 9.9 { a.get(&[(x[0] / 0.05).round() as i64]) } else { 0.0 })
        };
        let ab = convolve(&trimmed(g(s1)), &trimmed(g(s2))).unwrap();
        let s = (s1 * s1 + s2 * s2).sqrt();
        for m in [-40i64, 0, 13, 60] {
            let x = m as f64 * 0.05;
            let exact = (-x * x / (2.0 * s * s)).exp() / (s * (2.0 * PI).sqrt());
            assert!((ab.get(&[m]) - exact).abs() < 1e-6);
        }

        let small = LatticeGroup::new(1, 1.0, 3).unwrap();
        let a = ConvElement::delta(small, &[2], 1.0).unwrap();
        assert!(matches!(convolve(&a, &a), Err(Error::BoxOverflow(_))));
        let other = ConvElement::zero(LatticeGroup::new(1, 0.5, 3).unwrap());
        assert!(matches!(convolve(&a, &other), Err(Error::LatticeMismatch(_))));
    }

    #[test]
    fn associativity_and_trace() {
        let l = LatticeGroup::new(2, 0.5, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let small = LatticeGroup::new(2, 0.5, 2).unwrap();
        let lift = |a: ConvElement| {
            let mut out = ConvElement::zero(l);
            for (m, v) in a.support() {
                out.set(&m[..2], v).unwrap();
            }
            out
        };
        for _ in 0..10 {
            let [a, b, c] = std::array::from_fn(|_| lift(ConvElement::random_sparse(small, 6, &mut rng)));
            let left = convolve(&convolve(&a, &b).unwrap(), &c).unwrap();
            let right = convolve(&a, &convolve(&b, &c).unwrap()).unwrap();
            assert!(left.values().iter().zip(right.values()).all(|(x, y)| (x - y).abs() < 1e-10));
            let ab = plancherel_trace(&convolve(&a, &b).unwrap());
            let ba = plancherel_trace(&convolve(&b, &a).unwrap());
            assert!((ab - ba).abs() < 1e-10);
            let unfolded: f64 = a.support().iter().map(|(m, v)| v * b.get(&[-m[0], -m[1]])).sum::<f64>() * l.cell();
            assert!((ab - unfolded).abs() < 1e-12);
        }
        assert_eq!(plancherel_trace(&ConvElement::unit(l)), 4.0);
    }

    #[test]
    fn seminorm_examples() {
        let l = LatticeGroup::new(2, 0.5, 6).unwrap();
        let u = ConvElement::unit(l);
        for k in 0..4 {
            assert!((seminorm(k, &u) - 4.0 * 0.5).abs() < 1e-15);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = ConvElement::random_sparse(l, 10, &mut rng);
        let l2 = (a.values().iter().map(|v| v * v).sum::<f64>() * l.cell()).sqrt();
        assert!((seminorm(0, &a) - l2).abs() < 1e-15);
        assert!((0..5).all(|k| seminorm(k, &a) <= seminorm(k + 1, &a)));
    }

    #[test]
    fn tau_examples() {
        let l = LatticeGroup::new(2, 0.5, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = ConvElement::random_sparse(l, 10, &mut rng);
        let one = GroupCochain::constant(0, E2, 1.0);
        assert_eq!(tau_g(&one, &[a.clone()]).unwrap(), plancherel_trace(&a));
        let c = area();
        let z = ConvElement::zero(l);
        assert_eq!(tau_g(&c, &[z, a.clone(), a.clone()]).unwrap(), 0.0);

        let [a0, a1, a2] = std::array::from_fn(|_| ConvElement::random_sparse(l, 12, &mut rng));
        let t = tau_g(&c, &[a0.clone(), a1.clone(), a2.clone()]).unwrap();
        let r = tau_g(&c, &[a2, a0, a1]).unwrap();
        assert!((t - r).abs() < 1e-10 * (1.0 + t.abs()));
    }

    #[test]
    fn fourier_identity() {
        let l = LatticeGroup::new(2, 0.25, 32).unwrap();
        let c = area();
        let g = gaussian(l, [0.0, 0.0], 1.0, [0.0, 0.0]);
        let (lat, spec) = fourier_check(&c, &[g.clone(), g.clone(), g.clone()]).unwrap();
        assert!(lat.abs() < 1e-10 && spec.abs() < 1e-10);

        let trio = [
            gaussian(l, [0.3, -0.2], 0.9, [0.2, 0.0]),
            gaussian(l, [-0.4, 0.1], 1.1, [0.0, 0.3]),
            gaussian(l, [0.2, 0.5], 0.8, [-0.1, 0.2]),
        ];
        let (lat, spec) = fourier_check(&c, &trio).unwrap();
        assert!(lat.abs() > 1e-3 && (lat - spec).abs() < 1e-2 * lat.abs(), "{lat} {spec}");
        let scaled = [trio[0].scale(3.0), trio[1].clone(), trio[2].clone()];
        let (lat3, spec3) = fourier_check(&c, &scaled).unwrap();
        assert!((lat3 - 3.0 * lat).abs() < 1e-12 * lat.abs() && (spec3 - 3.0 * spec).abs() < 1e-12 * spec.abs());
    }
}

//! `G`-invariant smoothing kernels on `M = R^n x S`, their convolution and
//! partial trace, the cochains `tau^M_c` and the Morita comparison with the
//! convolution algebra of the lattice.

use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::conv::{ConvElement, LatticeGroup};
use crate::cyclic::{chern_pairing, tau_g_cochain, CyclicCochain, Idempotent, SampledAlgebra, IDEMPOTENT_TOL};
use crate::error::{Error, Result};
use crate::geom::{GroupElement, SymmetricSpaceModel};
use crate::groupcoh::GroupCochain;
use crate::proper::{Cutoff, Slice};

/// Lattice plus slice quadrature; the ambient data of a kernel.
#[derive(Clone, Debug)]
pub struct KernelAlgebra {
    lattice: LatticeGroup,
    slice: Arc<Slice>,
}

impl PartialEq for KernelAlgebra {
    fn eq(&self, o: &Self) -> bool {
        self.lattice == o.lattice && self.slice.weights() == o.slice.weights() && self.slice.points() == o.slice.points()
    }
}

impl KernelAlgebra {
    pub fn new(lattice: LatticeGroup, slice: Slice) -> Self {
        Self { lattice, slice: Arc::new(slice) }
    }

    pub fn lattice(&self) -> LatticeGroup {
        self.lattice
    }

    pub fn slice(&self) -> &Slice {
        &self.slice
    }

    fn m(&self) -> usize {
        self.slice.len()
    }

    /// `diag(w)`.
    pub fn weight_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(self.slice.weights()))
    }
}

/// The reduced kernel `k~(g, s, s') = k((0, s), (g, s'))` stored densely on
/// the lattice box.
#[derive(Clone, Debug)]
pub struct InvariantKernel {
    alg: KernelAlgebra,
    values: Vec<f64>,
}

impl InvariantKernel {
    pub fn zero(alg: &KernelAlgebra) -> Self {
        let m = alg.m();
        Self { alg: alg.clone(), values: vec![0.0; alg.lattice.len() * m * m] }
    }

    /// `delta_0 / h^n (x) delta_{ss'} / w(s)`.
    pub fn identity(alg: &KernelAlgebra) -> Self {
        let w = alg.weight_matrix();
        let inv = w.map(|x| if x != 0.0 { 1.0 / x } else { 0.0 });
        let unit = ConvElement::unit(alg.lattice);
        Self::tensor(alg, &unit, &inv).expect("shapes agree")
    }

    /// `k~(g, s, s') = f(g) e(s, s')`.
    pub fn tensor(alg: &KernelAlgebra, f: &ConvElement, e: &DMatrix<f64>) -> Result<Self> {
        let m = alg.m();
        if f.lattice() != alg.lattice {
            return Err(Error::LatticeMismatch("kernel and group element live on different lattices".into()));
        }
        if e.nrows() != m || e.ncols() != m {
            return Err(Error::InvalidArgument(format!("slice factor must be {m} x {m}")));
        }
        let mut out = Self::zero(alg);
        for (i, &v) in f.values().iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let blk = &mut out.values[i * m * m..(i + 1) * m * m];
            for s in 0..m {
                for t in 0..m {
                    blk[s * m + t] = v * e[(s, t)];
                }
            }
        }
        Ok(out)
    }

    /// Samples `k~` from a function of `(g, s, s')`.
    pub fn from_fn<F: Fn(&[f64], &[f64], &[f64]) -> f64>(alg: &KernelAlgebra, f: F) -> Self {
        let m = alg.m();
        let l = alg.lattice;
        let mut out = Self::zero(alg);
        for i in 0..l.len() {
            let g = l.point(&l.site(i)[..l.dim()]);
            for s in 0..m {
                for t in 0..m {
                    out.values[i * m * m + s * m + t] = f(&g, &alg.slice.points()[s], &alg.slice.points()[t]);
                }
            }
        }
        out
    }

    pub fn algebra(&self) -> &KernelAlgebra {
        &self.alg
    }

    pub fn get(&self, g: &[i64], s: usize, t: usize) -> f64 {
        let m = self.alg.m();
        self.alg.lattice.index(g).map_or(0.0, |i| self.values[i * m * m + s * m + t])
    }

    /// The `S x S` block at lattice site `g`; zero outside the box.
    pub fn block(&self, g: &[i64]) -> DMatrix<f64> {
        let m = self.alg.m();
        match self.alg.lattice.index(g) {
            Some(i) => DMatrix::from_row_slice(m, m, &self.values[i * m * m..(i + 1) * m * m]),
            None => DMatrix::zeros(m, m),
        }
    }

    /// Nonzero blocks.
    pub fn support(&self) -> Vec<([i64; 4], DMatrix<f64>)> {
        let m = self.alg.m();
        let l = self.alg.lattice;
        self.values
            .chunks(m * m)
            .enumerate()
            .filter(|(_, b)| b.iter().any(|&v| v != 0.0))
            .map(|(i, b)| (l.site(i), DMatrix::from_row_slice(m, m, b)))
            .collect()
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.alg != o.alg {
            return Err(Error::LatticeMismatch("kernels on different lattices or slices".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let values = self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect();
        Ok(Self { alg: self.alg.clone(), values })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { alg: self.alg.clone(), values: self.values.iter().map(|v| v * s).collect() }
    }

    /// `sum_g h^n max_s sum_{s'} |k~(g, s, s')| w(s')`.
    pub fn norm(&self) -> f64 {
        let m = self.alg.m();
        let w = self.alg.slice.weights();
        self.values
            .chunks(m * m)
            .map(|b| {
                (0..m)
                    .map(|s| (0..m).map(|t| b[s * m + t].abs() * w[t]).sum::<f64>())
                    .fold(0.0, f64::max)
            })
            .sum::<f64>()
            * self.alg.lattice.cell()
    }
}

/// `(k * k')~(g, s, s'') = sum_{g', s'} k~(g', s, s') k'~(g - g', s', s'') h^n w(s')`.
pub fn kernel_convolve(a: &InvariantKernel, b: &InvariantKernel) -> Result<InvariantKernel> {
    a.check(b)?;
    let alg = &a.alg;
    let l = alg.lattice;
    let m = alg.m();
    let n = l.dim();
    let w = alg.weight_matrix() * l.cell();
    let mut out = InvariantKernel::zero(alg);
    let sb = b.support();
    for (ga, ka) in a.support() {
        let kw = &ka * &w;
        for (gb, kb) in &sb {
            let mut g = [0i64; 4];
            for d in 0..n {
                g[d] = ga[d] + gb[d];
            }
            let idx = l.index(&g[..n]).ok_or_else(|| Error::BoxOverflow(g[..n].to_vec()))?;
            let prod = &kw * kb;
            let blk = &mut out.values[idx * m * m..(idx + 1) * m * m];
            for s in 0..m {
                for t in 0..m {
                    blk[s * m + t] += prod[(s, t)];
                }
            }
        }
    }
    Ok(out)
}

/// `Tr_S(k)(g) = sum_s k~(g, s, s) w(s)`.
pub fn partial_trace(k: &InvariantKernel) -> ConvElement {
    let alg = &k.alg;
    let m = alg.m();
    let w = alg.slice.weights();
    let values = k
        .values
        .chunks(m * m)
        .map(|b| (0..m).map(|s| b[s * m + s] * w[s]).sum())
        .collect();
    ConvElement::from_values(alg.lattice, values).expect("lengths agree")
}

impl SampledAlgebra for KernelAlgebra {
    type Elem = InvariantKernel;

    fn mul(&self, a: &InvariantKernel, b: &InvariantKernel) -> Result<InvariantKernel> {
        kernel_convolve(a, b)
    }
    fn add(&self, a: &InvariantKernel, b: &InvariantKernel) -> Result<InvariantKernel> {
        a.add(b)
    }
    fn scale(&self, a: &InvariantKernel, s: f64) -> InvariantKernel {
        a.scale(s)
    }
    fn zero(&self) -> InvariantKernel {
        InvariantKernel::zero(self)
    }
    fn norm(&self, a: &InvariantKernel) -> f64 {
        a.norm()
    }
}

struct ChiSite {
    site: [i64; 4],
    diag: Vec<f64>,
}

fn chi_sites(chi: &Cutoff, alg: &KernelAlgebra) -> Result<Vec<ChiSite>> {
    let a = chi.action();
    let l = alg.lattice;
    let n = l.dim();
    if a.group_dim() != n || (a.spacing() - l.spacing()).abs() > 1e-12 * l.spacing() {
        return Err(Error::LatticeMismatch("cut-off and kernels use different lattices".into()));
    }
    if a.slice().weights() != alg.slice.weights() {
        return Err(Error::InvalidArgument("cut-off and kernels use different slices".into()));
    }
    let (center, radius) = chi.support();
    let zero = vec![0.0; n];
    let w = alg.slice.weights();
    let mut out = Vec::new();
    for y in a.lattice_in_box(&zero, center, radius) {
        let mut site = [0i64; 4];
        for d in 0..n {
            site[d] = (y[d] / l.spacing()).round() as i64;
        }
        let diag: Vec<f64> = (0..alg.m()).map(|s| chi.eval(&y, s) * w[s] * l.cell()).collect();
        if diag.iter().any(|&v| v != 0.0) {
            out.push(ChiSite { site, diag });
        }
    }
    Ok(out)
}

fn diag_mul(d: &[f64], k: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = k.clone();
    for (s, &v) in d.iter().enumerate() {
        out.row_mut(s).scale_mut(v);
    }
    out
}

/// `tau^M_c(k_0, ..., k_k)`: the sum over `x_i = (h_i, s_i)` in `supp chi` and
/// `g_i` in the lattice of
/// `chi(x_0) .. chi(x_k) k_0(x_0, g_1 x_1) .. k_k(x_k, (g_1 .. g_k)^{-1} x_0) c(e, g_1, .., g_1 .. g_k)`.
///
/// Kernel values outside the box are zero.
pub fn tau_m(c: &GroupCochain, chi: &Cutoff, ks: &[InvariantKernel]) -> Result<f64> {
    let k = c.degree();
    if ks.len() != k + 1 {
        return Err(Error::InvalidArgument(format!("tau of a {k}-cochain takes {} kernels", k + 1)));
    }
    for x in &ks[1..] {
        ks[0].check(x)?;
    }
    let alg = ks[0].alg.clone();
    let l = alg.lattice;
    let n = l.dim();
    if c.model() != SymmetricSpaceModel::Euclidean(n) {
        return Err(Error::ModelMismatch(format!("cochain on {} paired with kernels over R^{n}", c.model())));
    }
    let sites = chi_sites(chi, &alg)?;
    let w = alg.slice.weights();
    let uniform = sites.iter().all(|cs| {
        let r = cs.diag[0] / w[0];
        cs.diag.iter().zip(w).all(|(d, ww)| (d / ww - r).abs() <= 1e-14 * r.abs().max(1e-300))
    });
    let supports: Vec<Vec<([i64; 4], DMatrix<f64>)>> = ks[..k].iter().map(|x| x.support()).collect();
    if supports.iter().any(|s| s.is_empty()) {
        return Ok(0.0);
    }
    let wm = alg.weight_matrix();
    let weight = l.cell().powi(k as i32);
    let element = |m: &[i64; 4]| -> GroupElement { l.element(&m[..n]) };

    // Sums c(e, G_1, .., G_k) over h-tuples, G_j = U_j + h_0 - h_j; `tr`
    // returns the slice trace for a given h-tuple.
    let smear = |cum: &[[i64; 4]], tr: &dyn Fn(&[usize]) -> f64| -> f64 {
        let p = sites.len();
        let mut hidx = vec![0usize; k + 1];
        let mut args: Vec<GroupElement> = Vec::with_capacity(k + 1);
        let mut total = 0.0;
        loop {
            let t = tr(&hidx);
            if t != 0.0 {
                args.clear();
                let h0 = sites[hidx[0]].site;
                for j in 0..=k {
                    let hj = sites[hidx[j]].site;
                    let mut g = [0i64; 4];
                    for d in 0..n {
                        g[d] = cum[j][d] + h0[d] - hj[d];
                    }
                    args.push(element(&g));
                }
                total += t * c.call(&args);
            }
            let mut j = 0;
            while j <= k {
                hidx[j] += 1;
                if hidx[j] < p {
                    break;
                }
                hidx[j] = 0;
                j += 1;
            }
            if j > k {
                return total;
            }
        }
    };

    let term = |blocks: &[DMatrix<f64>], cum: &[[i64; 4]]| -> f64 {
        if uniform {
            let mut prod = &wm * &blocks[0];
            for b in &blocks[1..] {
                prod = prod * &wm * b;
            }
            let trace = prod.trace();
            if trace == 0.0 {
                return 0.0;
            }
            let ratio: Vec<f64> = sites.iter().map(|cs| cs.diag[0] / w[0]).collect();
            trace * smear(cum, &|h: &[usize]| h.iter().map(|&i| ratio[i]).product())
        } else {
            smear(cum, &|h: &[usize]| {
                let mut prod = diag_mul(&sites[h[0]].diag, &blocks[0]);
                for (j, b) in blocks[1..].iter().enumerate() {
                    prod = prod * diag_mul(&sites[h[j + 1]].diag, b);
                }
                prod.trace()
            })
        }
    };

    if k == 0 {
        let b = ks[0].block(&[0; 4][..n]);
        return Ok(term(&[b], &[[0; 4]]));
    }

    let partial: Vec<f64> = supports[0]
        .par_iter()
        .map(|(u0, b0)| {
            let mut idx = vec![0usize; k - 1];
            let mut total = 0.0;
            let mut cum = vec![[0i64; 4]; k + 1];
            let mut blocks: Vec<DMatrix<f64>> = Vec::with_capacity(k + 1);
            loop {
                blocks.clear();
                blocks.push(b0.clone());
                let mut acc = *u0;
                cum[1] = acc;
                for (j, &i) in idx.iter().enumerate() {
                    let (u, b) = &supports[j + 1][i];
                    for d in 0..n {
                        acc[d] += u[d];
                    }
                    cum[j + 2] = acc;
                    blocks.push(b.clone());
                }
                let mut last = [0i64; 4];
                for d in 0..n {
                    last[d] = -acc[d];
                }
                let bk = ks[k].block(&last[..n]);
                if bk.iter().any(|&v| v != 0.0) {
                    blocks.push(bk);
                    total += term(&blocks, &cum);
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
                    return total;
                }
            }
        })
        .collect();
    Ok(partial.iter().sum::<f64>() * weight)
}

/// `tau^M_c` as a reduced cochain on the kernel algebra.
pub fn tau_m_cochain(c: &GroupCochain, chi: &Cutoff, alg: &KernelAlgebra) -> CyclicCochain<KernelAlgebra> {
    let (c, chi) = (c.clone(), chi.clone());
    CyclicCochain::extend_from_algebra(Arc::new(alg.clone()), c.degree(), move |ks| tau_m(&c, &chi, ks))
}

/// `u diag(1, 0) u^{-1}` with `u = (1 a; 0 1)(1 0; b 1)`, an idempotent over
/// the lattice algebra with finite support.
pub fn elementary_idempotent(a: &ConvElement, b: &ConvElement) -> Result<Idempotent<LatticeGroup>> {
    let l = a.lattice();
    let alg = Arc::new(l);
    let one = ConvElement::unit(l);
    let z = ConvElement::zero(l);
    let mat = |e: [&ConvElement; 4]| Idempotent::matrix(alg.clone(), DMatrix::zeros(2, 2), e.iter().map(|x| (*x).clone()).collect());
    let (na, nb) = (a.scale(-1.0), b.scale(-1.0));
    let u = mat([&one, a, &z, &one])?.mul(&mat([&one, &z, b, &one])?)?;
    let u_inv = mat([&one, &z, &nb, &one])?.mul(&mat([&one, &na, &z, &one])?)?;
    let p0 = mat([&one, &z, &z, &z])?;
    let e = u.mul(&p0)?.mul(&u_inv)?;
    let d = e.defect()?;
    if d > IDEMPOTENT_TOL {
        return Err(Error::NotIdempotent(d));
    }
    Ok(e)
}

/// Orthogonal projection onto the span of `vectors` in `L^2(S, w)`, as the
/// slice factor `E` with `E diag(w) E = E`.
pub fn slice_projection(slice: &Slice, vectors: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let m = slice.len();
    if vectors.iter().any(|v| v.len() != m) {
        return Err(Error::InvalidArgument(format!("slice vectors must have length {m}")));
    }
    let sq: Vec<f64> = slice.weights().iter().map(|w| w.sqrt()).collect();
    if vectors.is_empty() {
        return Ok(DMatrix::zeros(m, m));
    }
    let a = DMatrix::from_fn(m, vectors.len(), |i, j| vectors[j][i] * sq[i]);
    let svd = a.svd(true, false);
    let u = svd.u.expect("requested");
    let tol = 1e-12 * svd.singular_values.max().max(1e-300);
    let mut q = DMatrix::zeros(m, m);
    for (j, &sv) in svd.singular_values.iter().enumerate() {
        if sv > tol {
            let col = u.column(j);
            q += &col * col.transpose();
        }
    }
    Ok(DMatrix::from_fn(m, m, |i, j| q[(i, j)] / (sq[i] * sq[j])))
}

fn slice_defect(e: &DMatrix<f64>, w: &DMatrix<f64>) -> f64 {
    (e * w * e - e).abs().max()
}

/// `(<[e_1 (x) e_2], tau^M_c>, r <[Tr_S(e_1 (x) e_2) / r], tau^G_c>)` with
/// `r = Tr_S(e_2)` the rank of the slice factor.
pub fn morita_check(
    e1: &Idempotent<LatticeGroup>,
    e2: &DMatrix<f64>,
    c: &GroupCochain,
    chi: &Cutoff,
) -> Result<(f64, f64)> {
    let l = **e1.algebra();
    let slice = chi.action().slice().clone();
    let alg = KernelAlgebra::new(l, slice);
    let w = alg.weight_matrix();
    if e2.nrows() != alg.m() || e2.ncols() != alg.m() {
        return Err(Error::InvalidArgument(format!("slice factor must be {0} x {0}", alg.m())));
    }
    let d2 = slice_defect(e2, &w);
    if d2 > IDEMPOTENT_TOL {
        return Err(Error::NotIdempotent(d2));
    }
    let d1 = e1.defect()?;
    if d1 > IDEMPOTENT_TOL {
        return Err(Error::NotIdempotent(d1));
    }
    let n = e1.size();
    let unit = ConvElement::unit(l);
    let flat: Vec<ConvElement> = (0..n * n)
        .map(|i| {
            let x = e1.entry(i / n, i % n);
            x.elem.add(&unit.scale(x.scalar))
        })
        .collect::<Result<_>>()?;
    let kernels: Vec<InvariantKernel> = flat.iter().map(|f| InvariantKernel::tensor(&alg, f, e2)).collect::<Result<_>>()?;
    let alg_arc = Arc::new(alg.clone());
    let e = Idempotent::matrix(alg_arc.clone(), DMatrix::zeros(n, n), kernels)?;
    let zero_m = Idempotent::matrix(alg_arc.clone(), DMatrix::zeros(1, 1), vec![InvariantKernel::zero(&alg)])?;
    let lhs = chern_pairing(&e, &zero_m, &tau_m_cochain(c, chi, &alg))?;

    let r = (e2 * &w).trace();
    let rank = r.round();
    if (r - rank).abs() > 1e-8 {
        return Err(Error::NonIntegralPairing(r));
    }
    if rank == 0.0 {
        return Ok((lhs, 0.0));
    }
    let traced: Vec<ConvElement> = e.elems().iter().map(|k| partial_trace(k).scale(1.0 / rank)).collect();
    let lat = Arc::new(l);
    let f = Idempotent::from_elems(lat.clone(), n, traced)?;
    let zero_g = Idempotent::matrix(lat, DMatrix::zeros(1, 1), vec![ConvElement::zero(l)])?;
    let rhs = rank * chern_pairing(&f, &zero_g, &tau_g_cochain(c, l))?;
    Ok((lhs, rhs))
}

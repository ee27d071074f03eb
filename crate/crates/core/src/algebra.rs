//! Finitely supported elements of `l1(G, w)`: convolution (direct and FFT),
//! involution, convolution powers, weighted norms, the pairing with
//! `l_inf(G, 1/w)`, and the norm-limit spectral radius.

use std::collections::BTreeMap;

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::scalar::{czero, log_sum_exp, Real};
use crate::weight::{AxisWeight, Weight};

/// Amplitudes at or below this magnitude are dropped.
pub const CLEANUP_THRESHOLD: f64 = 1e-30;
/// `auto` uses the direct path when `|supp f| * |supp g|` is at most this.
pub const DIRECT_THRESHOLD: usize = 4096;
/// Largest dense transform (total length) the FFT path will allocate.
pub const FFT_LENGTH_CAP: usize = 1 << 24;
/// Largest support a convolution power may reach.
pub const SUPPORT_CAP: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraElement<T> {
    spec: GroupSpec,
    terms: BTreeMap<GroupElement, Complex<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvolutionPath {
    Auto,
    Direct,
    Fft,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Convolution<T> {
    pub element: AlgebraElement<T>,
    /// Path actually taken (`Direct` or `Fft`).
    pub path: ConvolutionPath,
    /// The FFT path was requested but the transform was too large.
    pub fft_fallback: bool,
}

#[inline]
fn keep<T: Real>(z: &Complex<T>) -> bool {
    z.norm() > T::lit(CLEANUP_THRESHOLD)
}

impl<T: Real> AlgebraElement<T> {
    pub fn zero(spec: &GroupSpec) -> Self {
        AlgebraElement { spec: spec.clone(), terms: BTreeMap::new() }
    }

    /// Point mass `delta_x`.
    pub fn delta(spec: &GroupSpec, x: &GroupElement) -> Result<Self> {
        Self::point(spec, x, Complex::new(T::one(), T::zero()))
    }

    pub fn point(spec: &GroupSpec, x: &GroupElement, amp: Complex<T>) -> Result<Self> {
        Self::from_terms(spec, [(x.clone(), amp)])
    }

    /// Sums repeated coordinates and drops negligible amplitudes.
    pub fn from_terms<I>(spec: &GroupSpec, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GroupElement, Complex<T>)>,
    {
        let mut map: BTreeMap<GroupElement, Complex<T>> = BTreeMap::new();
        for (x, a) in terms {
            spec.check(&x)?;
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::NonFinite(format!("amplitude at {x}")));
            }
            *map.entry(x).or_insert_with(czero) += a;
        }
        map.retain(|_, a| keep(a));
        Ok(AlgebraElement { spec: spec.clone(), terms: map })
    }

    /// Laurent polynomial `sum_k coeffs[k] delta_{lo + k}` on `Z`.
    pub fn laurent(lo: i64, coeffs: &[Complex<T>]) -> Self {
        let spec = GroupSpec::integers();
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(k, &a)| (GroupElement { free: vec![lo + k as i64], torsion: vec![] }, a));
        Self::from_terms(&spec, terms).expect("integer coordinates always belong to Z")
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &Complex<T>)> {
        self.terms.iter()
    }

    pub fn get(&self, x: &GroupElement) -> Complex<T> {
        self.terms.get(x).copied().unwrap_or_else(czero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Per free axis `(min, max)` of the support; `None` for the zero element.
    pub fn bounding_box(&self) -> Option<Vec<(i64, i64)>> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut bb: Vec<(i64, i64)> = first.free.iter().map(|&c| (c, c)).collect();
        for x in it {
            for (b, &c) in bb.iter_mut().zip(&x.free) {
                b.0 = b.0.min(c);
                b.1 = b.1.max(c);
            }
        }
        Some(bb)
    }

    fn same_spec(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::GroupMismatch {
                expected: self.spec.to_string(),
                detail: format!("element of {}", other.spec),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_spec(other)?;
        let mut terms = self.terms.clone();
        for (x, a) in &other.terms {
            *terms.entry(x.clone()).or_insert_with(czero) += *a;
        }
        terms.retain(|_, a| keep(a));
        Ok(AlgebraElement { spec: self.spec.clone(), terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex::new(-T::one(), T::zero())))
    }

    pub fn scale(&self, lambda: Complex<T>) -> Self {
        let mut terms: BTreeMap<_, _> = self.terms.iter().map(|(x, a)| (x.clone(), *a * lambda)).collect();
        terms.retain(|_, a| keep(a));
        AlgebraElement { spec: self.spec.clone(), terms }
    }

    /// `f*(x) = conj(f(-x))`.
    pub fn involution(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(x, a)| (self.spec.neg(x).expect("support lies in spec"), a.conj()))
            .collect();
        AlgebraElement { spec: self.spec.clone(), terms }
    }

    /// Pointwise map of amplitudes, keeping the support rule.
    pub fn map_amplitudes(&self, mut f: impl FnMut(&GroupElement, Complex<T>) -> Complex<T>) -> Self {
        let mut terms: BTreeMap<_, _> = self.terms.iter().map(|(x, a)| (x.clone(), f(x, *a))).collect();
        terms.retain(|_, a| keep(a));
        AlgebraElement { spec: self.spec.clone(), terms }
    }

    /// Unweighted `l1` norm.
    pub fn norm_l1(&self) -> T {
        self.terms.values().map(|a| a.norm()).sum()
    }

    /// `max |f(x)|`.
    pub fn max_abs(&self) -> T {
        self.terms.values().map(|a| a.norm()).fold(T::zero(), T::max)
    }

    /// `max |f(x) - g(x)|` over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn convolve(&self, other: &Self) -> Result<Self> {
        convolve(self, other, ConvolutionPath::Auto).map(|c| c.element)
    }
}

/// `(f * g)(x) = sum_y f(y) g(x - y)`.
///
/// The FFT path zero-pads free axes to the Minkowski sum of the support
/// bounding boxes and transforms torsion axes cyclically; its absolute error
/// scales with `||f||_1 ||g||_1`, and output amplitudes below that noise floor
/// are dropped.
pub fn convolve<T: Real>(f: &AlgebraElement<T>, g: &AlgebraElement<T>, path: ConvolutionPath) -> Result<Convolution<T>> {
    f.same_spec(g)?;
    let want_fft = match path {
        ConvolutionPath::Direct => false,
        ConvolutionPath::Fft => true,
        ConvolutionPath::Auto => f.len().saturating_mul(g.len()) > DIRECT_THRESHOLD,
    };
    if want_fft && !f.is_zero() && !g.is_zero() {
        if let Some(element) = convolve_fft(f, g)? {
            return Ok(Convolution { element, path: ConvolutionPath::Fft, fft_fallback: false });
        }
        return Ok(Convolution {
            element: convolve_direct(f, g)?,
            path: ConvolutionPath::Direct,
            fft_fallback: true,
        });
    }
    Ok(Convolution { element: convolve_direct(f, g)?, path: ConvolutionPath::Direct, fft_fallback: false })
}

fn convolve_direct<T: Real>(f: &AlgebraElement<T>, g: &AlgebraElement<T>) -> Result<AlgebraElement<T>> {
    let spec = &f.spec;
    let orders = spec.torsion_orders();
    let mut out: BTreeMap<GroupElement, Complex<T>> = BTreeMap::new();
    for (x, a) in &f.terms {
        for (y, b) in &g.terms {
            let free = x
                .free
                .iter()
                .zip(&y.free)
                .map(|(p, q)| p.checked_add(*q).ok_or_else(|| Error::Overflow(format!("{p} + {q}"))))
                .collect::<Result<Vec<_>>>()?;
            let torsion = x.torsion.iter().zip(&y.torsion).zip(orders).map(|((p, q), m)| (p + q) % m).collect();
            *out.entry(GroupElement { free, torsion }).or_insert_with(czero) += *a * *b;
        }
    }
    out.retain(|_, a| keep(a));
    Ok(AlgebraElement { spec: spec.clone(), terms: out })
}

/// In-place multidimensional DFT over a row-major array with the given shape.
pub(crate) fn fft_nd<T: Real>(data: &mut [Complex<T>], dims: &[usize], inverse: bool) {
    let total: usize = dims.iter().product();
    debug_assert_eq!(total, data.len());
    let mut buf = vec![czero::<T>(); total];
    for (a, &len) in dims.iter().enumerate() {
        if len <= 1 {
            continue;
        }
        let stride: usize = dims[a + 1..].iter().product();
        if stride == 1 {
            T::dft_chunks(data, len, inverse);
            continue;
        }
        let outer = total / (len * stride);
        for o in 0..outer {
            let base = o * len * stride;
            for i in 0..stride {
                let line = (o * stride + i) * len;
                for k in 0..len {
                    buf[line + k] = data[base + k * stride + i];
                }
            }
        }
        T::dft_chunks(&mut buf, len, inverse);
        for o in 0..outer {
            let base = o * len * stride;
            for i in 0..stride {
                let line = (o * stride + i) * len;
                for k in 0..len {
                    data[base + k * stride + i] = buf[line + k];
                }
            }
        }
    }
}

fn convolve_fft<T: Real>(f: &AlgebraElement<T>, g: &AlgebraElement<T>) -> Result<Option<AlgebraElement<T>>> {
    let spec = &f.spec;
    let d = spec.free_rank();
    let bf = f.bounding_box().expect("nonzero");
    let bg = g.bounding_box().expect("nonzero");
    let mut dims = Vec::with_capacity(spec.rank());
    let mut lo = Vec::with_capacity(d);
    for j in 0..d {
        let span = (bf[j].1 as i128 - bf[j].0 as i128) + (bg[j].1 as i128 - bg[j].0 as i128) + 1;
        let low = bf[j].0 as i128 + bg[j].0 as i128;
        let high = low + span - 1;
        if low < i64::MIN as i128 || high > i64::MAX as i128 {
            return Err(Error::Overflow("convolution support".into()));
        }
        if span > FFT_LENGTH_CAP as i128 {
            return Ok(None);
        }
        dims.push(span as usize);
        lo.push(low as i64);
    }
    dims.extend(spec.torsion_orders().iter().map(|&m| m as usize));
    let total = dims.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n));
    let total = match total {
        Some(t) if t <= FFT_LENGTH_CAP => t,
        _ => return Ok(None),
    };

    let index = |x: &GroupElement, origin: &[(i64, i64)]| -> usize {
        let mut idx = 0usize;
        for j in 0..d {
            idx = idx * dims[j] + (x.free[j] - origin[j].0) as usize;
        }
        for (i, &t) in x.torsion.iter().enumerate() {
            idx = idx * dims[d + i] + t as usize;
        }
        idx
    };
    let mut a = vec![czero::<T>(); total];
    let mut b = vec![czero::<T>(); total];
    for (x, v) in &f.terms {
        a[index(x, &bf)] = *v;
    }
    for (y, v) in &g.terms {
        b[index(y, &bg)] = *v;
    }
    fft_nd(&mut a, &dims, false);
    fft_nd(&mut b, &dims, false);
    for (p, q) in a.iter_mut().zip(&b) {
        *p = *p * *q;
    }
    fft_nd(&mut a, &dims, true);

    let scale = T::one() / T::lit(total as f64);
    let floor = T::lit(CLEANUP_THRESHOLD).max(T::lit(4.0) * T::epsilon() * f.norm_l1() * g.norm_l1());
    let mut terms = BTreeMap::new();
    let mut coord = vec![0usize; dims.len()];
    for v in a.iter() {
        let z = *v * scale;
        if z.norm() > floor {
            let free = (0..d).map(|j| lo[j] + coord[j] as i64).collect();
            let torsion = coord[d..].iter().map(|&t| t as u64).collect();
            terms.insert(GroupElement { free, torsion }, z);
        }
        // row-major odometer
        for k in (0..dims.len()).rev() {
            coord[k] += 1;
            if coord[k] < dims[k] {
                break;
            }
            coord[k] = 0;
        }
    }
    Ok(Some(AlgebraElement { spec: spec.clone(), terms }))
}

/// `f^{*n}` by repeated squaring.
pub fn power<T: Real>(f: &AlgebraElement<T>, n: u64) -> Result<AlgebraElement<T>> {
    power_with(f, n, ConvolutionPath::Auto)
}

pub fn power_with<T: Real>(f: &AlgebraElement<T>, n: u64, path: ConvolutionPath) -> Result<AlgebraElement<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("power exponent must be >= 1".into()));
    }
    let mut result: Option<AlgebraElement<T>> = None;
    let mut base = f.clone();
    let mut base_exp = 1u64;
    let mut k = n;
    loop {
        if k & 1 == 1 {
            let next = match &result {
                None => base.clone(),
                Some(r) => convolve(r, &base, path)?.element,
            };
            if next.len() > SUPPORT_CAP {
                return Err(Error::SupportCap { cap: SUPPORT_CAP, largest_n: base_exp });
            }
            result = Some(next);
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        let sq = convolve(&base, &base, path)?.element;
        if sq.len() > SUPPORT_CAP {
            return Err(Error::SupportCap { cap: SUPPORT_CAP, largest_n: base_exp });
        }
        base = sq;
        base_exp *= 2;
    }
    Ok(result.expect("n >= 1"))
}

/// `||f||_{1,w} = sum |f(x)| w(x)`.
pub fn norm_l1w<T: Real>(f: &AlgebraElement<T>, w: &Weight<T>) -> Result<T> {
    check_weight(f, w)?;
    let mut acc = T::zero();
    for (x, a) in &f.terms {
        acc = acc + a.norm() * w.evaluate(x)?;
    }
    Ok(acc)
}

/// `ln ||f||_{1,w}`, computed in log space so huge weights do not overflow.
pub fn ln_norm_l1w<T: Real>(f: &AlgebraElement<T>, w: &Weight<T>) -> Result<T> {
    check_weight(f, w)?;
    let logs = f
        .terms
        .iter()
        .map(|(x, a)| Ok(a.norm().ln() + w.ln_value(x)?))
        .collect::<Result<Vec<T>>>()?;
    Ok(log_sum_exp(&logs))
}

fn check_weight<T: Real>(f: &AlgebraElement<T>, w: &Weight<T>) -> Result<()> {
    if f.spec() != w.spec() {
        return Err(Error::GroupMismatch { expected: f.spec().to_string(), detail: format!("weight on {}", w.spec()) });
    }
    Ok(())
}

/// Element of `l_inf(G, 1/w)` with finitely many nonzero values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualElement<T> {
    spec: GroupSpec,
    values: BTreeMap<GroupElement, Complex<T>>,
}

impl<T: Real> DualElement<T> {
    pub fn from_values<I>(spec: &GroupSpec, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GroupElement, Complex<T>)>,
    {
        let mut map = BTreeMap::new();
        for (x, v) in values {
            spec.check(&x)?;
            map.insert(x, v);
        }
        Ok(DualElement { spec: spec.clone(), values: map })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn get(&self, x: &GroupElement) -> Complex<T> {
        self.values.get(x).copied().unwrap_or_else(czero)
    }

    pub fn values(&self) -> impl Iterator<Item = (&GroupElement, &Complex<T>)> {
        self.values.iter()
    }

    /// `||g||_{inf,1/w} = sup |g(x)| / w(x)`.
    pub fn dual_norm(&self, w: &Weight<T>) -> Result<T> {
        let mut m = T::zero();
        for (x, v) in &self.values {
            m = m.max(v.norm() / w.evaluate(x)?);
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualPairing<T> {
    pub value: Complex<T>,
    /// `||g||_{inf,1/w} ||f||_{1,w}`.
    pub bound: T,
    pub bound_check: bool,
}

/// `<f, g> = sum f(x) g(x)` with the check `|<f, g>| <= ||g||_{inf,1/w} ||f||_{1,w} + 1e-12`.
pub fn dual_pair<T: Real>(f: &AlgebraElement<T>, g: &DualElement<T>, w: &Weight<T>) -> Result<DualPairing<T>> {
    if f.spec() != g.spec() {
        return Err(Error::GroupMismatch { expected: f.spec().to_string(), detail: format!("dual element on {}", g.spec()) });
    }
    let mut value = czero();
    for (x, a) in &f.terms {
        value = value + *a * g.get(x);
    }
    let bound = g.dual_norm(w)? * norm_l1w(f, w)?;
    let bound_check = value.norm() <= bound + T::lit(1e-12);
    Ok(DualPairing { value, bound, bound_check })
}

/// `g(x) = w(x) conj(f(x)) / |f(x)|` on `supp f`: unit dual norm and `<f, g> = ||f||_{1,w}`.
pub fn attaining_dual<T: Real>(f: &AlgebraElement<T>, w: &Weight<T>) -> Result<DualElement<T>> {
    check_weight(f, w)?;
    let values = f
        .terms
        .iter()
        .map(|(x, a)| Ok((x.clone(), a.conj() * (w.evaluate(x)? / a.norm()))))
        .collect::<Result<Vec<_>>>()?;
    DualElement::from_values(f.spec(), values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormLimitEstimate<T> {
    /// `min` over the ladder of `||f^n||_{1,w}^(1/n)`: an upper bound on `r(f)`.
    pub estimate: T,
    pub n_reached: u64,
    pub ladder: Vec<(u64, T)>,
    /// The support cap stopped the ladder before `max_exponent`.
    pub truncated: bool,
}

fn polynomially_bounded<T: Real>(w: &Weight<T>) -> bool {
    w.axes()[..w.spec().free_rank()]
        .iter()
        .all(|a| matches!(a, AxisWeight::Constant(_) | AxisWeight::Poly { .. }))
}

/// `r(f)` from `||f^n||_{1,w}^(1/n)` on the ladder `n = 1, 2, 4, ... <= max_exponent`.
///
/// Powers are renormalized after every squaring and the norm is tracked in
/// log space. Weights that grow faster than polynomially use the direct
/// convolution path, whose error is relative per coefficient.
pub fn spectral_radius_normlimit<T: Real>(
    f: &AlgebraElement<T>,
    w: &Weight<T>,
    max_exponent: u64,
) -> Result<NormLimitEstimate<T>> {
    if max_exponent < 2 {
        return Err(Error::InvalidArgument(format!("max_exponent must be >= 2, got {max_exponent}")));
    }
    if f.is_zero() {
        return Err(Error::InvalidArgument("spectral radius of the zero element requested".into()));
    }
    check_weight(f, w)?;
    let path = if polynomially_bounded(w) { ConvolutionPath::Auto } else { ConvolutionPath::Direct };
    let nu = f.norm_l1();
    let mut g = f.scale(Complex::new(T::one() / nu, T::zero()));
    let mut ln_scale = nu.ln();
    let mut ladder = Vec::new();
    let mut estimate = T::infinity();
    let mut truncated = false;
    let mut n = 1u64;
    loop {
        let ln_norm = ln_scale + ln_norm_l1w(&g, w)?;
        let v = (ln_norm / T::lit(n as f64)).exp();
        estimate = estimate.min(v);
        ladder.push((n, v));
        let Some(next) = n.checked_mul(2).filter(|&m| m <= max_exponent) else { break };
        let sq = convolve(&g, &g, path)?.element;
        if sq.len() > SUPPORT_CAP {
            truncated = true;
            break;
        }
        let nu = sq.norm_l1();
        if !(nu > T::zero()) || !nu.is_finite() {
            break;
        }
        g = sq.scale(Complex::new(T::one() / nu, T::zero()));
        ln_scale = ln_scale * T::lit(2.0) + nu.ln();
        n = next;
    }
    Ok(NormLimitEstimate { estimate, n_reached: n, ladder, truncated })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusComparison<T> {
    pub r_unweighted: T,
    pub r_weighted: T,
    /// `sup w` over `supp f` and `-supp f`.
    pub m_bound: T,
    pub sandwich_ok: bool,
}

/// Checks `r_1(f) / M <= r_w(f) <= M r_1(f)` on a common ladder (1e-6 relative slack).
pub fn compare_radii<T: Real>(f: &AlgebraElement<T>, w: &Weight<T>, max_exponent: u64) -> Result<RadiusComparison<T>> {
    check_weight(f, w)?;
    let mut m_bound = T::zero();
    for x in f.terms.keys() {
        m_bound = m_bound.max(w.evaluate(x)?).max(w.evaluate(&f.spec.neg(x)?)?);
    }
    let unit = Weight::unit(f.spec());
    let r_unweighted = spectral_radius_normlimit(f, &unit, max_exponent)?.estimate;
    let r_weighted = spectral_radius_normlimit(f, w, max_exponent)?.estimate;
    let tol = T::lit(1e-6);
    let sandwich_ok = r_weighted >= r_unweighted / m_bound * (T::one() - tol)
        && r_weighted <= m_bound * r_unweighted * (T::one() + tol);
    Ok(RadiusComparison { r_unweighted, r_weighted, m_bound, sandwich_ok })
}

/// Random element with `nnz` draws of free coordinates in `[-radius, radius]`,
/// uniform torsion residues, and amplitudes uniform in the unit disk.
pub fn random_element<T: Real, R: Rng + ?Sized>(spec: &GroupSpec, rng: &mut R, radius: i64, nnz: usize) -> AlgebraElement<T> {
    let terms = (0..nnz).map(|_| {
        let free = (0..spec.free_rank()).map(|_| rng.gen_range(-radius..=radius)).collect();
        let torsion = spec.torsion_orders().iter().map(|&m| rng.gen_range(0..m)).collect();
        (GroupElement { free, torsion }, random_unit_disk(rng))
    });
    AlgebraElement::from_terms(spec, terms).expect("coordinates drawn inside spec")
}

pub(crate) fn random_unit_disk<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    loop {
        let re: f64 = rng.gen_range(-1.0..1.0);
        let im: f64 = rng.gen_range(-1.0..1.0);
        if re * re + im * im <= 1.0 {
            return Complex::new(T::lit(re), T::lit(im));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group_spec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type C = Complex<f64>;

    fn z() -> GroupSpec {
        GroupSpec::integers()
    }

    fn e(n: i64) -> GroupElement {
        z().element(&[n], &[]).unwrap()
    }

    fn re(x: f64) -> C {
        C::new(x, 0.0)
    }

    #[test]
    fn point_masses_convolve_to_point_mass() {
        let g = make_group_spec(1, &[3]).unwrap();
        let a = g.element(&[2], &[2]).unwrap();
        let b = g.element(&[-5], &[2]).unwrap();
        let f = AlgebraElement::<f64>::delta(&g, &a).unwrap();
        let h = AlgebraElement::delta(&g, &b).unwrap();
        for path in [ConvolutionPath::Direct, ConvolutionPath::Fft] {
            let c = convolve(&f, &h, path).unwrap();
            assert_eq!(c.path, path);
            let want = AlgebraElement::delta(&g, &g.add(&a, &b).unwrap()).unwrap();
            assert!(c.element.max_abs_diff(&want).unwrap() < 1e-14);
        }
    }

    #[test]
    fn binomial_square() {
        let f = AlgebraElement::laurent(0, &[re(1.0), re(1.0)]);
        let sq = convolve(&f, &f, ConvolutionPath::Direct).unwrap().element;
        assert_eq!(sq, AlgebraElement::laurent(0, &[re(1.0), re(2.0), re(1.0)]));
    }

    #[test]
    fn fft_matches_direct_on_random_z2_pairs() {
        let g = make_group_spec(2, &[]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let f = random_element::<f64, _>(&g, &mut rng, 16, 30);
            let h = random_element::<f64, _>(&g, &mut rng, 16, 30);
            let d = convolve(&f, &h, ConvolutionPath::Direct).unwrap().element;
            let q = convolve(&f, &h, ConvolutionPath::Fft).unwrap().element;
            assert!(d.max_abs_diff(&q).unwrap() < 1e-12);
        }
    }

    #[test]
    fn fft_handles_torsion_axes() {
        let g = make_group_spec(1, &[4, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let f = random_element::<f64, _>(&g, &mut rng, 5, 12);
            let h = random_element::<f64, _>(&g, &mut rng, 5, 12);
            let d = convolve(&f, &h, ConvolutionPath::Direct).unwrap().element;
            let q = convolve(&f, &h, ConvolutionPath::Fft).unwrap().element;
            assert!(d.max_abs_diff(&q).unwrap() < 1e-12);
        }
    }

    #[test]
    fn oversized_fft_falls_back_to_direct() {
        let f = AlgebraElement::<f64>::from_terms(&z(), [(e(0), re(1.0)), (e(FFT_LENGTH_CAP as i64), re(1.0))]).unwrap();
        let c = convolve(&f, &f, ConvolutionPath::Fft).unwrap();
        assert!(c.fft_fallback);
        assert_eq!(c.path, ConvolutionPath::Direct);
        assert_eq!(c.element.len(), 3);
    }

    #[test]
    fn involution_examples() {
        let f = AlgebraElement::<f64>::point(&z(), &e(1), C::new(0.0, 1.0)).unwrap();
        let s = f.involution();
        assert_eq!(s.get(&e(-1)), C::new(0.0, -1.0));
        assert_eq!(s.len(), 1);

        let sym = AlgebraElement::laurent(-1, &[re(2.0), re(1.0), re(2.0)]);
        assert_eq!(sym.involution(), sym);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = make_group_spec(1, &[5]).unwrap();
        for _ in 0..20 {
            let f = random_element::<f64, _>(&g, &mut rng, 4, 6);
            let h = random_element::<f64, _>(&g, &mut rng, 4, 6);
            assert_eq!(f.involution().involution(), f);
            let lhs = f.convolve(&h).unwrap().involution();
            let rhs = h.involution().convolve(&f.involution()).unwrap();
            assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
        }
    }

    #[test]
    fn power_examples() {
        let d1 = AlgebraElement::<f64>::delta(&z(), &e(1)).unwrap();
        assert_eq!(power(&d1, 5).unwrap(), AlgebraElement::delta(&z(), &e(5)).unwrap());

        // binomial oracle
        let f = AlgebraElement::laurent(0, &[re(1.0), re(1.0)]);
        for n in 1..=20u64 {
            let p = power(&f, n).unwrap();
            let mut binom = 1.0f64;
            for k in 0..=n {
                assert!((p.get(&e(k as i64)) - re(binom)).norm() <= 1e-12 * binom);
                binom = binom * (n - k) as f64 / (k + 1) as f64;
            }
            assert_eq!(p.len(), n as usize + 1);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = make_group_spec(2, &[2]).unwrap();
        for _ in 0..10 {
            let f = random_element::<f64, _>(&g, &mut rng, 3, 8);
            let chain = f.convolve(&f).unwrap().convolve(&f).unwrap().convolve(&f).unwrap();
            assert!(power(&f, 4).unwrap().max_abs_diff(&chain).unwrap() < 1e-10);
        }
        assert!(power(&f, 0).is_err());
    }

    #[test]
    fn norm_examples() {
        let w = Weight::poly_z(1.0);
        assert_eq!(norm_l1w(&AlgebraElement::delta(&z(), &e(4)).unwrap(), &w).unwrap(), 5.0);
        assert_eq!(norm_l1w(&AlgebraElement::zero(&z()), &w).unwrap(), 0.0);
        let f = AlgebraElement::from_terms(&z(), [(e(-1), re(1.0)), (e(2), re(2.0))]).unwrap();
        assert_eq!(norm_l1w(&f, &w).unwrap(), 8.0);
        assert!((ln_norm_l1w(&f, &w).unwrap() - 8f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn dual_examples() {
        let w = Weight::poly_z(1.0);
        let f = AlgebraElement::<f64>::delta(&z(), &e(0)).unwrap();
        let g = DualElement::from_values(&z(), (-2..=2).map(|n| (e(n), re(1.0)))).unwrap();
        let p = dual_pair(&f, &g, &w).unwrap();
        assert_eq!(p.value, re(1.0));
        assert!(p.bound_check);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let f = random_element::<f64, _>(&z(), &mut rng, 10, 7);
            let g = attaining_dual(&f, &w).unwrap();
            let p = dual_pair(&f, &g, &w).unwrap();
            let norm = norm_l1w(&f, &w).unwrap();
            assert!((p.value - re(norm)).norm() <= 1e-12 * norm.max(1.0));
            assert!((g.dual_norm(&w).unwrap() - 1.0).abs() <= 4.0 * f64::EPSILON);
        }
    }

    #[test]
    fn normlimit_examples() {
        let w = Weight::poly_z(1.0);
        let d1 = AlgebraElement::<f64>::delta(&z(), &e(1)).unwrap();
        let r = spectral_radius_normlimit(&d1, &w, 1 << 16).unwrap();
        assert!(r.estimate < 1.0003);
        assert_eq!(r.n_reached, 1 << 16);

        let d0 = AlgebraElement::<f64>::delta(&z(), &e(0)).unwrap();
        assert_eq!(spectral_radius_normlimit(&d0, &w, 8).unwrap().estimate, 1.0);

        let f = AlgebraElement::laurent(-1, &[re(1.0), re(0.0), re(1.0)]);
        let r = spectral_radius_normlimit(&f, &Weight::unit(&z()), 1 << 12).unwrap();
        for (_, v) in &r.ladder {
            assert!((v - 2.0).abs() < 1e-9, "{v}");
        }
        assert!(spectral_radius_normlimit(&AlgebraElement::zero(&z()), &w, 8).is_err());
    }

    #[test]
    fn compare_radii_examples() {
        let f = AlgebraElement::laurent(-1, &[re(0.5), re(1.0), re(0.25)]);
        let c = compare_radii(&f, &Weight::poly_z(1.0), 1 << 10).unwrap();
        assert_eq!(c.m_bound, 2.0);
        assert!(c.sandwich_ok);

        let c = compare_radii(&f, &Weight::unit(&z()), 1 << 10).unwrap();
        assert_eq!(c.m_bound, 1.0);
        assert_eq!(c.r_weighted, c.r_unweighted);

        let d1 = AlgebraElement::<f64>::delta(&z(), &e(1)).unwrap();
        let c = compare_radii(&d1, &Weight::exp_z(2f64.ln()), 1 << 10).unwrap();
        assert!((c.r_unweighted - 1.0).abs() < 1e-12);
        assert!((c.r_weighted - 2.0).abs() < 1e-12);
        assert!((c.m_bound - 2.0).abs() < 1e-12);
        assert!(c.sandwich_ok);
    }

    #[test]
    fn f32_convolution() {
        let f = AlgebraElement::<f32>::laurent(0, &[Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)]);
        let p = power_with(&f, 6, ConvolutionPath::Fft).unwrap();
        assert!((p.get(&e(3)).re - 20.0).abs() < 1e-4);
    }
}

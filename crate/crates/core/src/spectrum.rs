//! The character space of `l1(G, w)` for product weights: a product of annuli
//! `R_-j <= |z_j| <= R_+j` on free axes and root-of-unity cycles on torsion
//! axes.
//!
//! Transform convention: `f^(chi) = sum_x f(x) chi(x)` with
//! `chi(x) = prod z_j^{x_j} prod exp(2 pi i k_i t_i / m_i)`, no conjugation.
//! On the torus this differs from the conjugated convention only by the
//! relabelling `z -> conj(z)`.

use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::algebra::{fft_nd, AlgebraElement};
use crate::error::{Error, Result};
use crate::group::{enumerate_ball, enumerate_ball_with_cap, GroupElement, GroupSpec};
use crate::linalg;
use crate::scalar::{cis, cone, czero, Real};
use crate::weight::{weight_radius, Weight};

/// Absolute slack on `|z_j|` when validating a character.
pub const MODULUS_TOLERANCE: f64 = 1e-9;
/// Separating elements are refused above this Vandermonde condition number.
pub const CONDITION_CAP: f64 = 1e8;
/// Largest exclusion set accepted by [`separating_element`].
pub const SEPARATION_CAP: usize = 64;
/// Largest group accepted by [`finite_gelfand_probe`].
pub const FINITE_PROBE_CAP: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Character<T> {
    spec: GroupSpec,
    /// Nonzero `z_j` per free axis.
    pub free: Vec<Complex<T>>,
    /// `k_i`, encoding `exp(2 pi i k_i / m_i)`.
    pub torsion: Vec<u64>,
}

impl<T: Real> Character<T> {
    pub fn new(spec: &GroupSpec, free: Vec<Complex<T>>, torsion: Vec<u64>) -> Result<Self> {
        if free.len() != spec.free_rank() || torsion.len() != spec.torsion_orders().len() {
            return Err(Error::InvalidCharacter(format!(
                "expected {} free and {} torsion coordinates for {spec}",
                spec.free_rank(),
                spec.torsion_orders().len()
            )));
        }
        if let Some(j) = free.iter().position(|z| !(z.norm() > T::zero()) || !z.norm().is_finite()) {
            return Err(Error::InvalidCharacter(format!("free coordinate {j} must be finite and nonzero")));
        }
        Ok(Character { spec: spec.clone(), free, torsion })
    }

    /// The trivial character `chi == 1`.
    pub fn identity(spec: &GroupSpec) -> Self {
        Character {
            spec: spec.clone(),
            free: vec![cone(); spec.free_rank()],
            torsion: vec![0; spec.torsion_orders().len()],
        }
    }

    /// Unimodular character `z_j = exp(i angles_j)`.
    pub fn on_torus(spec: &GroupSpec, angles: &[T], torsion: Vec<u64>) -> Result<Self> {
        Self::new(spec, angles.iter().map(|&a| cis(a)).collect(), torsion)
    }

    /// Character on `Z` at the point `z`.
    pub fn at_z(z: Complex<T>) -> Result<Self> {
        Self::new(&GroupSpec::integers(), vec![z], vec![])
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// `chi(x)`.
    pub fn eval(&self, x: &GroupElement) -> Result<Complex<T>> {
        if !self.spec.contains(x) {
            return Err(Error::GroupMismatch { expected: self.spec.to_string(), detail: x.to_string() });
        }
        let mut acc = cone();
        for (z, &n) in self.free.iter().zip(&x.free) {
            acc = acc * int_power(*z, n)?;
        }
        for ((&k, &t), &m) in self.torsion.iter().zip(&x.torsion).zip(self.spec.torsion_orders()) {
            acc = acc * root_of_unity(k as u128 * t as u128, m);
        }
        Ok(acc)
    }

    pub fn is_unimodular(&self, tol: T) -> bool {
        self.free.iter().all(|z| (z.norm() - T::one()).abs() <= tol)
    }

    fn distance(&self, other: &Self) -> T {
        let free = self.free.iter().zip(&other.free).map(|(a, b)| (*a - *b).norm()).fold(T::zero(), T::max);
        let tors_equal = self
            .torsion
            .iter()
            .zip(&other.torsion)
            .zip(self.spec.torsion_orders())
            .all(|((a, b), m)| a % m == b % m);
        if tors_equal {
            free
        } else {
            T::infinity()
        }
    }
}

/// `exp(2 pi i e / m)` with the exponent reduced first.
fn root_of_unity<T: Real>(e: u128, m: u64) -> Complex<T> {
    let r = (e % m as u128) as f64;
    cis(T::lit(2.0 * std::f64::consts::PI * r / m as f64))
}

/// `z^n` in polar form; overflow is an error naming the exponent.
fn int_power<T: Real>(z: Complex<T>, n: i64) -> Result<Complex<T>> {
    if n == 0 {
        return Ok(cone());
    }
    let (r, theta) = z.to_polar();
    let nf = T::lit(n as f64);
    let modulus = (nf * r.ln()).exp();
    if !modulus.is_finite() || (modulus == T::zero() && r > T::zero()) {
        return Err(Error::Overflow(format!("z^{n} with |z| = {r}")));
    }
    Ok(cis(nf * theta) * modulus)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annulus<T> {
    pub inner: T,
    pub outer: T,
    /// Both radii come from closed forms.
    pub exact: bool,
    /// For estimated radii: spread of the last two ladder rungs (outer plus inner).
    pub bracket_width: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterSpace<T> {
    spec: GroupSpec,
    pub annuli: Vec<Annulus<T>>,
    pub cycles: Vec<u64>,
}

impl<T: Real> CharacterSpace<T> {
    /// The unit torus `T^d x prod Z_m`, the character space for any weight with `r_w == 1`.
    pub fn torus(spec: &GroupSpec) -> Self {
        let annuli = (0..spec.free_rank())
            .map(|_| Annulus { inner: T::one(), outer: T::one(), exact: true, bracket_width: T::zero() })
            .collect();
        CharacterSpace { spec: spec.clone(), annuli, cycles: spec.torsion_orders().to_vec() }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn is_torus(&self, tol: T) -> bool {
        self.annuli
            .iter()
            .all(|a| (a.inner - T::one()).abs() <= tol && (a.outer - T::one()).abs() <= tol)
    }

    /// Boundary radii of free axis `j`: one circle for a degenerate annulus.
    pub fn boundary_radii(&self, j: usize) -> Vec<T> {
        let a = &self.annuli[j];
        if (a.outer - a.inner).abs() <= T::lit(MODULUS_TOLERANCE) {
            vec![a.outer]
        } else {
            vec![a.inner, a.outer]
        }
    }
}

fn ladder_gap<T: Real>(ladder: &[(u64, T)]) -> T {
    match ladder {
        [.., (_, a), (_, b)] => (*a - *b).abs(),
        _ => T::zero(),
    }
}

/// `R_+j = r_w(e_j)`, `R_-j = 1 / r_w(-e_j)` per free axis; cycles on torsion axes.
///
/// Estimated radii bracket the true annulus from outside: the ladder bound
/// over-estimates `R_+` and under-estimates `R_-`.
pub fn character_space<T: Real>(w: &Weight<T>, max_exponent: u64) -> Result<CharacterSpace<T>> {
    let spec = w.spec();
    let mut annuli = Vec::with_capacity(spec.free_rank());
    for j in 0..spec.free_rank() {
        let e = spec.generator(j);
        let plus = weight_radius(w, &e, max_exponent)?;
        let minus = weight_radius(w, &spec.neg(&e)?, max_exponent)?;
        let exact = plus.exact.is_some() && minus.exact.is_some();
        let bracket_width = if exact { T::zero() } else { ladder_gap(&plus.ladder) + ladder_gap(&minus.ladder) };
        annuli.push(Annulus { inner: T::one() / minus.value(), outer: plus.value(), exact, bracket_width });
    }
    Ok(CharacterSpace { spec: spec.clone(), annuli, cycles: spec.torsion_orders().to_vec() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CharacterViolation {
    Shape { detail: String },
    Modulus { axis: usize, modulus: f64, inner: f64, outer: f64 },
    TorsionIndex { axis: usize, index: u64, order: u64 },
}

impl std::fmt::Display for CharacterViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CharacterViolation::Shape { detail } => write!(f, "{detail}"),
            CharacterViolation::Modulus { axis, modulus, inner, outer } => {
                write!(f, "axis {axis}: |z| = {modulus} outside [{inner}, {outer}]")
            }
            CharacterViolation::TorsionIndex { axis, index, order } => {
                write!(f, "torsion axis {axis}: index {index} not reduced modulo {order}")
            }
        }
    }
}

/// Checks `R_-j - eps <= |z_j| <= R_+j + eps` and that torsion indices are reduced.
pub fn validate_character<T: Real>(cs: &CharacterSpace<T>, chi: &Character<T>) -> std::result::Result<(), CharacterViolation> {
    if chi.spec != cs.spec {
        return Err(CharacterViolation::Shape { detail: format!("character on {} but space on {}", chi.spec, cs.spec) });
    }
    let eps = T::lit(MODULUS_TOLERANCE);
    for (axis, (z, a)) in chi.free.iter().zip(&cs.annuli).enumerate() {
        let r = z.norm();
        if r < a.inner - eps || r > a.outer + eps {
            return Err(CharacterViolation::Modulus {
                axis,
                modulus: r.as_f64(),
                inner: a.inner.as_f64(),
                outer: a.outer.as_f64(),
            });
        }
    }
    for (axis, (&k, &m)) in chi.torsion.iter().zip(&cs.cycles).enumerate() {
        if k >= m {
            return Err(CharacterViolation::TorsionIndex { axis, index: k, order: m });
        }
    }
    Ok(())
}

pub(crate) fn require_valid<T: Real>(cs: &CharacterSpace<T>, chi: &Character<T>) -> Result<()> {
    validate_character(cs, chi).map_err(|v| Error::InvalidCharacter(v.to_string()))
}

/// `f^(chi) = sum_x f(x) chi(x)`.
pub fn gelfand_eval<T: Real>(f: &AlgebraElement<T>, chi: &Character<T>) -> Result<Complex<T>> {
    if f.spec() != chi.spec() {
        return Err(Error::GroupMismatch { expected: f.spec().to_string(), detail: format!("character on {}", chi.spec()) });
    }
    let mut acc = czero();
    for (x, a) in f.terms() {
        acc = acc + *a * chi.eval(x)?;
    }
    Ok(acc)
}

/// Transform values on a tensor grid: free axis `j` sampled at
/// `radii[j] * exp(2 pi i s / sizes[j])`, `s = 0..sizes[j]`, torsion axes fully
/// enumerated. Row-major, free axes first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GelfandGrid<T> {
    spec: GroupSpec,
    pub radii: Vec<T>,
    pub sizes: Vec<usize>,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> GelfandGrid<T> {
    pub fn new(spec: &GroupSpec, radii: Vec<T>, sizes: Vec<usize>, values: Vec<Complex<T>>) -> Result<Self> {
        if radii.len() != spec.free_rank() || sizes.len() != spec.free_rank() {
            return Err(Error::InvalidArgument(format!("grid needs one radius and size per free axis of {spec}")));
        }
        if sizes.iter().any(|&m| m == 0) || radii.iter().any(|r| !(*r > T::zero())) {
            return Err(Error::InvalidArgument("grid sizes and radii must be positive".into()));
        }
        let dims = grid_dims(spec, &sizes);
        if values.len() != dims.iter().product::<usize>() {
            return Err(Error::InvalidArgument(format!("grid expects {} values, got {}", dims.iter().product::<usize>(), values.len())));
        }
        Ok(GelfandGrid { spec: spec.clone(), radii, sizes, values })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    fn dims(&self) -> Vec<usize> {
        grid_dims(&self.spec, &self.sizes)
    }

    /// CSV rows `angle, radius, re, im` for a single free axis; with several
    /// axes or torsion the columns are `angle_j, radius_j, ..., k_i, ..., re, im`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let d = self.spec.free_rank();
        let simple = d == 1 && self.spec.torsion_orders().is_empty();
        let mut wtr = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
        let mut header: Vec<String> = Vec::new();
        if simple {
            header.extend(["angle".into(), "radius".into()]);
        } else {
            for j in 0..d {
                header.push(format!("angle_{j}"));
                header.push(format!("radius_{j}"));
            }
            for i in 0..self.spec.torsion_orders().len() {
                header.push(format!("k_{i}"));
            }
        }
        header.extend(["re".into(), "im".into()]);
        wtr.write_record(&header).map_err(io)?;
        let dims = self.dims();
        let mut coord = vec![0usize; dims.len()];
        for v in &self.values {
            let mut row = Vec::with_capacity(header.len());
            for j in 0..d {
                let angle = 2.0 * std::f64::consts::PI * coord[j] as f64 / self.sizes[j] as f64;
                row.push(format!("{angle:.17e}"));
                row.push(format!("{:.17e}", self.radii[j].as_f64()));
            }
            for &k in &coord[d..] {
                row.push(k.to_string());
            }
            row.push(format!("{:.17e}", v.re.as_f64()));
            row.push(format!("{:.17e}", v.im.as_f64()));
            wtr.write_record(&row).map_err(io)?;
            advance(&mut coord, &dims);
        }
        wtr.flush().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
        Ok(())
    }
}

fn grid_dims(spec: &GroupSpec, sizes: &[usize]) -> Vec<usize> {
    sizes.iter().copied().chain(spec.torsion_orders().iter().map(|&m| m as usize)).collect()
}

fn advance(coord: &mut [usize], dims: &[usize]) {
    for k in (0..dims.len()).rev() {
        coord[k] += 1;
        if coord[k] < dims[k] {
            return;
        }
        coord[k] = 0;
    }
}

fn check_grid_radii<T: Real>(cs: &CharacterSpace<T>, radii: &[T]) -> Result<()> {
    let eps = T::lit(MODULUS_TOLERANCE);
    for (j, (r, a)) in radii.iter().zip(&cs.annuli).enumerate() {
        if *r < a.inner - eps || *r > a.outer + eps {
            return Err(Error::InvalidArgument(format!("radius {r} on axis {j} outside [{}, {}]", a.inner, a.outer)));
        }
    }
    Ok(())
}

/// Evaluates `f^` on the tensor grid by folding coefficients modulo the grid
/// size and running one inverse DFT; folding is exact because
/// `exp(2 pi i x s / M)` is `M`-periodic in `x`.
fn evaluate_on_grid<T: Real>(f: &AlgebraElement<T>, radii: &[T], sizes: &[usize]) -> Result<Vec<Complex<T>>> {
    let spec = f.spec();
    let dims = grid_dims(spec, sizes);
    let total: usize = dims.iter().product();
    let mut data = vec![czero::<T>(); total];
    let d = spec.free_rank();
    for (x, a) in f.terms() {
        let mut idx = 0usize;
        let mut ln_tilt = T::zero();
        for j in 0..d {
            idx = idx * dims[j] + x.free[j].rem_euclid(dims[j] as i64) as usize;
            ln_tilt = ln_tilt + T::lit(x.free[j] as f64) * radii[j].ln();
        }
        for (i, &t) in x.torsion.iter().enumerate() {
            idx = idx * dims[d + i] + t as usize;
        }
        let tilt = ln_tilt.exp();
        if !tilt.is_finite() {
            return Err(Error::Overflow(format!("radius power at {x}")));
        }
        data[idx] = data[idx] + *a * tilt;
    }
    fft_nd(&mut data, &dims, true);
    Ok(data)
}

/// Samples `f^` on the grid with the given radii (each inside its annulus).
pub fn sample_gelfand_grid<T: Real>(
    f: &AlgebraElement<T>,
    cs: &CharacterSpace<T>,
    radii: &[T],
    sizes: &[usize],
) -> Result<GelfandGrid<T>> {
    if f.spec() != cs.spec() {
        return Err(Error::GroupMismatch { expected: cs.spec().to_string(), detail: format!("element on {}", f.spec()) });
    }
    let grid = GelfandGrid::new(f.spec(), radii.to_vec(), sizes.to_vec(), Vec::new()).err();
    if let Some(Error::InvalidArgument(msg)) = grid {
        if !msg.starts_with("grid expects") {
            return Err(Error::InvalidArgument(msg));
        }
    }
    check_grid_radii(cs, radii)?;
    let values = evaluate_on_grid(f, radii, sizes)?;
    GelfandGrid::new(f.spec(), radii.to_vec(), sizes.to_vec(), values)
}

/// Aliasing is reported when more than this fraction of the spectral energy
/// falls outside the declared index window.
pub const ALIASING_ENERGY_THRESHOLD: f64 = 1e-8;

/// Recovers `f` from transform samples on a tensor grid.
///
/// `window[j] = (lo, hi)` declares the coefficient span on free axis `j`; it
/// must be shorter than the grid size on that axis.
pub fn inverse_gelfand<T: Real>(
    grid: &GelfandGrid<T>,
    cs: &CharacterSpace<T>,
    window: &[(i64, i64)],
) -> Result<AlgebraElement<T>> {
    let spec = grid.spec();
    if spec != cs.spec() {
        return Err(Error::GroupMismatch { expected: cs.spec().to_string(), detail: format!("grid on {spec}") });
    }
    let d = spec.free_rank();
    if window.len() != d {
        return Err(Error::InvalidArgument(format!("need a window for each of the {d} free axes")));
    }
    check_grid_radii(cs, &grid.radii)?;
    for (j, &(lo, hi)) in window.iter().enumerate() {
        let span = hi as i128 - lo as i128 + 1;
        if span < 1 {
            return Err(Error::InvalidArgument(format!("empty window on axis {j}")));
        }
        if span > grid.sizes[j] as i128 {
            return Err(Error::Aliasing(format!(
                "declared span {span} on axis {j} exceeds the {} grid points",
                grid.sizes[j]
            )));
        }
    }
    let dims = grid.dims();
    let total: usize = dims.iter().product();
    let mut bins = grid.values.clone();
    fft_nd(&mut bins, &dims, false);
    let norm = T::one() / T::lit(total as f64);

    // residue -> coordinate inside the window, per free axis
    let lookup: Vec<Vec<Option<i64>>> = (0..d)
        .map(|j| {
            let m = dims[j] as i64;
            let mut v = vec![None; dims[j]];
            for x in window[j].0..=window[j].1 {
                v[x.rem_euclid(m) as usize] = Some(x);
            }
            v
        })
        .collect();

    let mut inside = Vec::new();
    let mut energy_out = T::zero();
    let mut energy_all = T::zero();
    let mut coord = vec![0usize; dims.len()];
    for b in &bins {
        let c = *b * norm;
        let e = c.norm_sqr();
        energy_all = energy_all + e;
        let free: Option<Vec<i64>> = (0..d).map(|j| lookup[j][coord[j]]).collect();
        match free {
            Some(free) => {
                let mut ln_tilt = T::zero();
                for j in 0..d {
                    ln_tilt = ln_tilt + T::lit(free[j] as f64) * grid.radii[j].ln();
                }
                let torsion = coord[d..].iter().map(|&t| t as u64).collect();
                inside.push((GroupElement { free, torsion }, c * (-ln_tilt).exp()));
            }
            None => energy_out = energy_out + e,
        }
        advance(&mut coord, &dims);
    }
    if energy_out > T::lit(ALIASING_ENERGY_THRESHOLD) * energy_all {
        return Err(Error::Aliasing(format!(
            "energy {:.3e} of {:.3e} lies outside the declared window",
            energy_out.as_f64(),
            energy_all.as_f64()
        )));
    }
    AlgebraElement::from_terms(spec, inside)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleEstimate<T> {
    /// Largest sampled `|f^|` on the distinguished boundary.
    pub value: T,
    /// The true maximum lies in `[value, value + sampling_bound]`.
    pub sampling_bound: T,
    pub samples_per_circle: usize,
    pub argmax: Character<T>,
}

/// Minimum samples per circle accepted by [`spectral_radius_oracle`] for `f`.
pub fn required_samples<T: Real>(f: &AlgebraElement<T>) -> usize {
    let diam = f
        .bounding_box()
        .map(|bb| bb.iter().map(|(lo, hi)| (hi - lo) as usize).max().unwrap_or(0))
        .unwrap_or(0);
    (4 * diam).max(4)
}

/// `r(f) = max |f^|` over the character space, sampled on the product of the
/// boundary circles (maximum modulus in each variable) times the torsion cycles.
///
/// The sampling bound is `sum_j L_j pi / M` with the angular Lipschitz constant
/// `L_j = sum_x |f(x)| |x_j| prod_k max(R_-k^{x_k}, R_+k^{x_k})`.
pub fn spectral_radius_oracle<T: Real>(
    f: &AlgebraElement<T>,
    cs: &CharacterSpace<T>,
    samples_per_circle: usize,
) -> Result<OracleEstimate<T>> {
    let spec = f.spec();
    if spec != cs.spec() {
        return Err(Error::GroupMismatch { expected: cs.spec().to_string(), detail: format!("element on {spec}") });
    }
    let d = spec.free_rank();
    let required = if d == 0 { 1 } else { required_samples(f) };
    if samples_per_circle < required {
        return Err(Error::SamplingTooCoarse { given: samples_per_circle, required });
    }
    let m = if d == 0 { 1 } else { samples_per_circle };

    let mut lipschitz = vec![T::zero(); d];
    for (x, a) in f.terms() {
        let mut scale = a.norm();
        for j in 0..d {
            let a_j = &cs.annuli[j];
            let n = T::lit(x.free[j] as f64);
            scale = scale * (n * a_j.inner.ln()).exp().max((n * a_j.outer.ln()).exp());
        }
        for j in 0..d {
            lipschitz[j] = lipschitz[j] + scale * T::lit(x.free[j].unsigned_abs() as f64);
        }
    }
    let step = T::PI() / T::lit(m as f64);
    let sampling_bound = lipschitz.iter().fold(T::zero(), |acc, l| acc + *l * step);

    let choices: Vec<Vec<T>> = (0..d).map(|j| cs.boundary_radii(j)).collect();
    let sizes = vec![m; d];
    let dims = grid_dims(spec, &sizes);
    let mut best = T::neg_infinity();
    let mut best_at: (Vec<T>, Vec<usize>) = (Vec::new(), vec![0; dims.len()]);
    let mut pick = vec![0usize; d];
    loop {
        let radii: Vec<T> = (0..d).map(|j| choices[j][pick[j]]).collect();
        let values = evaluate_on_grid(f, &radii, &sizes)?;
        let mut coord = vec![0usize; dims.len()];
        for v in &values {
            let a = v.norm();
            if a > best {
                best = a;
                best_at = (radii.clone(), coord.clone());
            }
            advance(&mut coord, &dims);
        }
        // odometer over the boundary-radius choices
        let mut k = d;
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] < choices[k].len() {
                break;
            }
            pick[k] = 0;
            if k == 0 {
                k = usize::MAX;
                break;
            }
        }
        if k == usize::MAX || d == 0 {
            break;
        }
    }
    let (radii, coord) = best_at;
    let free = (0..d)
        .map(|j| cis(T::lit(2.0 * std::f64::consts::PI * coord[j] as f64 / m as f64)) * radii[j])
        .collect();
    let torsion = coord[d..].iter().map(|&k| k as u64).collect();
    let argmax = Character::new(spec, free, torsion)?;
    Ok(OracleEstimate { value: best.max(T::zero()), sampling_bound, samples_per_circle: m, argmax })
}

/// Ball elements sorted by max-norm, then `|c|` with positive before negative
/// per coordinate, then torsion residues: `0, 1, -1, 2, -2, ...` on `Z`.
pub fn probe_order(spec: &GroupSpec, radius: u64) -> Result<Vec<GroupElement>> {
    let mut ball = enumerate_ball(spec, radius)?;
    ball.sort_by_key(|x| {
        let free: Vec<(u64, bool)> = x.free.iter().map(|&c| (c.unsigned_abs(), c < 0)).collect();
        (x.max_norm(), free, x.torsion.clone())
    });
    Ok(ball)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointwiseProduct<T> {
    /// `(x, chi(x) chi'(x) / w(x))` over the probe ball.
    pub table: Vec<(GroupElement, Complex<T>)>,
    pub multiplicative: bool,
    pub witness: Option<(GroupElement, GroupElement)>,
}

/// Tabulates `h = chi ._w chi'`, `h(x) = chi(x) chi'(x) / w(x)`, and tests
/// `h(x + y) = h(x) h(y)` (1e-9 relative) on pairs from the half-radius ball.
pub fn w_pointwise_product<T: Real>(
    chi: &Character<T>,
    chi2: &Character<T>,
    w: &Weight<T>,
    probe_ball: u64,
) -> Result<PointwiseProduct<T>> {
    let spec = w.spec();
    if chi.spec() != spec || chi2.spec() != spec {
        return Err(Error::GroupMismatch { expected: spec.to_string(), detail: "character on another group".into() });
    }
    let ball = probe_order(spec, probe_ball)?;
    let mut table = Vec::with_capacity(ball.len());
    let mut lookup = BTreeMap::new();
    for x in &ball {
        let h = chi.eval(x)? * chi2.eval(x)? / w.evaluate(x)?;
        lookup.insert(x.clone(), h);
        table.push((x.clone(), h));
    }
    let half: Vec<&GroupElement> = ball.iter().filter(|x| x.max_norm() <= probe_ball / 2).collect();
    let tol = T::lit(1e-9);
    let violates = |x: &GroupElement, y: &GroupElement| -> Result<bool> {
        let s = spec.add(x, y)?;
        let lhs = lookup[&s];
        let rhs = lookup[x] * lookup[y];
        Ok((lhs - rhs).norm() > tol * lhs.norm().max(rhs.norm()))
    };
    // square shells of the probe order: (0..s, s) then (s, 0..=s)
    for s in 0..half.len() {
        let pairs = (0..s).map(|i| (i, s)).chain((0..=s).map(|i| (s, i)));
        for (i, j) in pairs {
            if violates(half[i], half[j])? {
                return Ok(PointwiseProduct {
                    table,
                    multiplicative: false,
                    witness: Some((half[i].clone(), half[j].clone())),
                });
            }
        }
    }
    Ok(PointwiseProduct { table, multiplicative: true, witness: None })
}

/// Finitely supported `f` with `f^(phi) = 1` and `f^(e) = 0` for `e` in `excluded`.
///
/// Picks a direction `v` (generators first) on which the points
/// `u_p = chi_p(v)` are well separated, then solves the Vandermonde system
/// for `f = sum_{k=0..|E|} c_k delta_{k v}`. Requires a torus character space.
pub fn separating_element<T: Real>(
    cs: &CharacterSpace<T>,
    excluded: &[Character<T>],
    phi: &Character<T>,
) -> Result<AlgebraElement<T>> {
    let spec = cs.spec();
    if !cs.is_torus(T::lit(MODULUS_TOLERANCE)) {
        return Err(Error::Unsupported(
            "separating elements need r_w == 1 (a torus character space); the algebra is not regular otherwise".into(),
        ));
    }
    if excluded.len() > SEPARATION_CAP {
        return Err(Error::InvalidArgument(format!("at most {SEPARATION_CAP} excluded characters, got {}", excluded.len())));
    }
    require_valid(cs, phi)?;
    for e in excluded {
        require_valid(cs, e)?;
    }
    if excluded.is_empty() {
        return AlgebraElement::delta(spec, &spec.identity());
    }
    let points: Vec<&Character<T>> = excluded.iter().chain(std::iter::once(phi)).collect();
    let n = points.len();
    let same = T::lit(1e-12);
    for a in 0..n {
        for b in a + 1..n {
            if points[a].distance(points[b]) <= same {
                return Err(Error::InvalidArgument(format!("characters {a} and {b} coincide")));
            }
        }
    }

    let radius = spec.radius_for_budget(3, 4096);
    let candidates = probe_order(spec, radius)?;
    let mut worst: Option<(usize, usize, f64)> = None;
    for v in candidates.iter().filter(|v| !v.is_identity()) {
        let u: Vec<Complex<T>> = points.iter().map(|p| p.eval(v)).collect::<Result<_>>()?;
        let mut vander = Vec::with_capacity(n * n);
        for up in &u {
            let mut pk = cone::<T>();
            for _ in 0..n {
                vander.push(pk);
                pk = pk * *up;
            }
        }
        let cond = linalg::condition_number(n, &vander);
        if !(cond <= CONDITION_CAP) {
            let (a, b) = closest_pair(&u);
            if worst.map(|w| cond < w.2).unwrap_or(true) {
                worst = Some((a, b, cond));
            }
            continue;
        }
        let mut rhs = vec![czero::<T>(); n];
        rhs[n - 1] = cone();
        let Some(coef) = linalg::solve(n, &vander, &rhs) else { continue };
        let terms = coef
            .iter()
            .enumerate()
            .map(|(k, c)| Ok((spec.multiple(v, k as i64)?, *c)))
            .collect::<Result<Vec<_>>>()?;
        let f = AlgebraElement::from_terms(spec, terms)?;
        let tol = T::lit(1e-9);
        let hit = (gelfand_eval(&f, phi)? - cone()).norm() <= tol;
        let miss = excluded.iter().map(|e| gelfand_eval(&f, e).map(|z| z.norm() <= tol)).collect::<Result<Vec<_>>>()?;
        if hit && miss.iter().all(|&ok| ok) {
            return Ok(f);
        }
    }
    let (a, b, condition) = worst.unwrap_or((0, n - 1, f64::INFINITY));
    Err(Error::IllConditioned { a, b, condition, cap: CONDITION_CAP })
}

fn closest_pair<T: Real>(u: &[Complex<T>]) -> (usize, usize) {
    let mut best = (0, 1, T::infinity());
    for a in 0..u.len() {
        for b in a + 1..u.len() {
            let d = (u[a] - u[b]).norm();
            if d < best.2 {
                best = (a, b, d);
            }
        }
    }
    (best.0, best.1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteProbe<T> {
    pub order: u64,
    /// Rank of the `|G| x |G^|` character table.
    pub rank: usize,
    pub surjective: bool,
    /// `max ||f||_{1,w} / ||f^||_inf - 1` over the probe family.
    pub isometry_defect: T,
    pub witness: AlgebraElement<T>,
}

/// Probes the Gelfand map of a finite group: rank of the character table and
/// the isometry defect over deltas, a flat-spectrum chirp and two-point
/// elements `delta_0 + u delta_x`, `u` in `{1, i, -1, -i}`.
pub fn finite_gelfand_probe<T: Real>(spec: &GroupSpec, w: &Weight<T>) -> Result<FiniteProbe<T>> {
    if !spec.is_finite() {
        return Err(Error::InvalidArgument(format!("{spec} is not finite")));
    }
    if w.spec() != spec {
        return Err(Error::GroupMismatch { expected: spec.to_string(), detail: format!("weight on {}", w.spec()) });
    }
    let order = spec.order().unwrap_or(u128::MAX);
    if order > FINITE_PROBE_CAP as u128 {
        return Err(Error::EnumerationCap { requested: order, cap: FINITE_PROBE_CAP });
    }
    let elements = enumerate_ball_with_cap(spec, 0, FINITE_PROBE_CAP)?;

    // the character table is the Kronecker product of per-axis DFT matrices
    let mut rank = 1usize;
    for &m in spec.torsion_orders() {
        let m = m as usize;
        let table: Vec<Complex<T>> = (0..m)
            .flat_map(|t| (0..m).map(move |k| root_of_unity((t * k) as u128, m as u64)))
            .collect();
        rank *= linalg::numerical_rank(m, m, &table);
    }

    let dims: Vec<usize> = spec.torsion_orders().iter().map(|&m| m as usize).collect();
    let sup_transform = |f: &AlgebraElement<T>| -> T {
        let mut data = vec![czero::<T>(); elements.len()];
        for (x, a) in f.terms() {
            let mut idx = 0usize;
            for (i, &t) in x.torsion.iter().enumerate() {
                idx = idx * dims[i] + t as usize;
            }
            data[idx] = *a;
        }
        fft_nd(&mut data, &dims, true);
        data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    };

    let mut probes: Vec<AlgebraElement<T>> = Vec::new();
    for x in &elements {
        probes.push(AlgebraElement::delta(spec, x)?);
    }
    probes.push(chirp(spec, &elements)?);
    let units = [cone(), Complex::new(T::zero(), T::one()), -cone::<T>(), Complex::new(T::zero(), -T::one())];
    for x in elements.iter().filter(|x| !x.is_identity()).take(64) {
        for u in units {
            probes.push(AlgebraElement::from_terms(spec, [(spec.identity(), cone()), (x.clone(), u)])?);
        }
    }

    let mut defect = T::neg_infinity();
    let mut witness = probes[0].clone();
    for f in probes {
        let sup = sup_transform(&f);
        if !(sup > T::zero()) {
            continue;
        }
        let ratio = crate::algebra::norm_l1w(&f, w)? / sup - T::one();
        if ratio > defect {
            defect = ratio;
            witness = f;
        }
    }
    Ok(FiniteProbe { order: order as u64, rank, surjective: rank as u128 == order, isometry_defect: defect, witness })
}

/// `||f||_{1,w} / ||f^||_inf - 1` for `f` on a finite group.
pub fn isometry_defect<T: Real>(f: &AlgebraElement<T>, w: &Weight<T>) -> Result<T> {
    let spec = f.spec();
    if !spec.is_finite() {
        return Err(Error::InvalidArgument(format!("{spec} is not finite")));
    }
    let order = spec.order().unwrap_or(u128::MAX);
    if order > FINITE_PROBE_CAP as u128 {
        return Err(Error::EnumerationCap { requested: order, cap: FINITE_PROBE_CAP });
    }
    let sizes: Vec<usize> = Vec::new();
    let values = evaluate_on_grid(f, &[], &sizes)?;
    let sup = values.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    if !(sup > T::zero()) {
        return Err(Error::InvalidArgument("isometry defect of the zero element".into()));
    }
    Ok(crate::algebra::norm_l1w(f, w)? / sup - T::one())
}

/// Tensor product of per-axis chirps; each has a flat DFT of modulus `sqrt(m)`.
fn chirp<T: Real>(spec: &GroupSpec, elements: &[GroupElement]) -> Result<AlgebraElement<T>> {
    let terms = elements.iter().map(|x| {
        let mut phase = 0.0f64;
        for (&t, &m) in x.torsion.iter().zip(spec.torsion_orders()) {
            let (t, m) = (t as u128, m as u128);
            phase += if m % 2 == 0 {
                // exp(i pi t^2 / m)
                std::f64::consts::PI * ((t * t) % (2 * m)) as f64 / m as f64
            } else {
                // exp(2 pi i 2^{-1} t^2 / m)
                let half = (m + 1) / 2;
                2.0 * std::f64::consts::PI * ((half * t % m) * t % m) as f64 / m as f64
            };
        }
        (x.clone(), cis(T::lit(phase)))
    });
    AlgebraElement::from_terms(spec, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{norm_l1w, random_element};
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

    #[test]
    fn character_space_examples() {
        let cs = character_space(&Weight::poly_z(1.0), 1 << 20).unwrap();
        assert_eq!((cs.annuli[0].inner, cs.annuli[0].outer), (1.0, 1.0));
        assert!(cs.annuli[0].exact && cs.is_torus(1e-12));

        let cs = character_space(&Weight::exp_z(2f64.ln()), 1 << 20).unwrap();
        assert!((cs.annuli[0].outer - 2.0).abs() < 1e-14);
        assert!((cs.annuli[0].inner - 0.5).abs() < 1e-14);

        let z4 = GroupSpec::cyclic(4).unwrap();
        let cs = character_space(&Weight::<f64>::unit(&z4), 64).unwrap();
        assert!(cs.annuli.is_empty());
        assert_eq!(cs.cycles, vec![4]);
        // chi(1)^4 = chi(0) = 1 for every character of Z_4
        for k in 0..4 {
            let chi = Character::<f64>::new(&z4, vec![], vec![k]).unwrap();
            let c1 = chi.eval(&z4.generator(0)).unwrap();
            assert!((c1.powi(4) - C::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn validate_examples() {
        let torus = character_space(&Weight::poly_z(1.0), 1 << 10).unwrap();
        assert!(validate_character(&torus, &Character::at_z(C::new(1.0, 0.0)).unwrap()).is_ok());
        let v = validate_character(&torus, &Character::at_z(C::new(1.5, 0.0)).unwrap()).unwrap_err();
        assert!(matches!(v, CharacterViolation::Modulus { axis: 0, .. }));
        let ann = character_space(&Weight::exp_z(2f64.ln()), 1 << 10).unwrap();
        assert!(validate_character(&ann, &Character::at_z(C::new(0.6, 0.0)).unwrap()).is_ok());
        assert!(validate_character(&ann, &Character::at_z(C::new(0.0, 0.4)).unwrap()).is_err());

        let z4 = GroupSpec::cyclic(4).unwrap();
        let cs = CharacterSpace::<f64>::torus(&z4);
        let off = Character::new(&z4, vec![], vec![4]).unwrap();
        assert!(matches!(validate_character(&cs, &off), Err(CharacterViolation::TorsionIndex { .. })));
    }

    #[test]
    fn eval_examples() {
        let zz = C::new(0.3, -1.1);
        let chi = Character::at_z(zz).unwrap();
        let f = AlgebraElement::delta(&z(), &e(5)).unwrap();
        assert!((gelfand_eval(&f, &chi).unwrap() - zz.powi(5)).norm() < 1e-13);
        let d0 = AlgebraElement::delta(&z(), &e(0)).unwrap();
        assert_eq!(gelfand_eval(&d0, &chi).unwrap(), C::new(1.0, 0.0));
        let huge = Character::at_z(C::new(1e10, 0.0)).unwrap();
        let far = AlgebraElement::delta(&z(), &e(100)).unwrap();
        assert!(matches!(gelfand_eval(&far, &huge), Err(Error::Overflow(_))));
    }

    #[test]
    fn transform_is_multiplicative() {
        let g = make_group_spec(1, &[3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let f = random_element::<f64, _>(&g, &mut rng, 4, 5);
            let h = random_element::<f64, _>(&g, &mut rng, 4, 5);
            let zz = C::from_polar(rand::Rng::gen_range(&mut rng, 0.5..2.0), rand::Rng::gen_range(&mut rng, 0.0..6.28));
            let chi = Character::new(&g, vec![zz], vec![rand::Rng::gen_range(&mut rng, 0..3)]).unwrap();
            let lhs = gelfand_eval(&f.convolve(&h).unwrap(), &chi).unwrap();
            let rhs = gelfand_eval(&f, &chi).unwrap() * gelfand_eval(&h, &chi).unwrap();
            assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn character_multiplicative_on_elements() {
        let g = make_group_spec(2, &[5]).unwrap();
        let chi = Character::new(&g, vec![C::new(0.8, 0.3), C::new(-1.2, 0.1)], vec![3]).unwrap();
        let x = g.element(&[3, -2], &[4]).unwrap();
        let y = g.element(&[-7, 5], &[3]).unwrap();
        let lhs = chi.eval(&g.add(&x, &y).unwrap()).unwrap();
        let rhs = chi.eval(&x).unwrap() * chi.eval(&y).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * lhs.norm());
    }

    #[test]
    fn oracle_examples() {
        let f = AlgebraElement::laurent(-1, &[C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0)]);
        let torus = CharacterSpace::torus(&z());
        let o = spectral_radius_oracle(&f, &torus, 64).unwrap();
        assert!((o.value - 2.0).abs() < 1e-12);

        let d0 = AlgebraElement::<f64>::delta(&z(), &e(0)).unwrap();
        assert_eq!(spectral_radius_oracle(&d0, &torus, 8).unwrap().value, 1.0);

        let ann = character_space(&Weight::exp_z(2f64.ln()), 64).unwrap();
        let d1 = AlgebraElement::<f64>::delta(&z(), &e(1)).unwrap();
        let o = spectral_radius_oracle(&d1, &ann, 16).unwrap();
        assert!((o.value - 2.0).abs() < 1e-12);
        assert!((o.argmax.free[0].norm() - 2.0).abs() < 1e-12);

        let wide = AlgebraElement::laurent(-10, &[C::new(1.0, 0.0); 21]);
        assert_eq!(
            spectral_radius_oracle(&wide, &torus, 16).unwrap_err(),
            Error::SamplingTooCoarse { given: 16, required: 80 }
        );
    }

    #[test]
    fn oracle_on_product_of_annuli_matches_brute_force() {
        let g = make_group_spec(2, &[2]).unwrap();
        let w = Weight::new(
            g.clone(),
            vec![
                crate::weight::AxisWeight::Exp { a: 0.3 },
                crate::weight::AxisWeight::Poly { alpha: 1.0 },
                crate::weight::AxisWeight::Constant(1.0),
            ],
        )
        .unwrap();
        let cs = character_space(&w, 1 << 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = random_element::<f64, _>(&g, &mut rng, 2, 6);
        let o = spectral_radius_oracle(&f, &cs, 64).unwrap();
        // brute force over a finer grid of the same boundary
        let mut best: f64 = 0.0;
        for r0 in cs.boundary_radii(0) {
            for a in 0..256 {
                for b in 0..256 {
                    for k in 0..2 {
                        let t0 = a as f64 * std::f64::consts::TAU / 256.0;
                        let t1 = b as f64 * std::f64::consts::TAU / 256.0;
                        let chi = Character::new(&g, vec![C::from_polar(r0, t0), C::from_polar(1.0, t1)], vec![k]).unwrap();
                        best = best.max(gelfand_eval(&f, &chi).unwrap().norm());
                    }
                }
            }
        }
        assert!(o.value <= best + 1e-12);
        assert!(best <= o.value + o.sampling_bound + 1e-12);
    }

    #[test]
    fn inverse_round_trip_and_zero_data() {
        let torus = CharacterSpace::torus(&z());
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = random_element::<f64, _>(&z(), &mut rng, 10, 12);
        let grid = sample_gelfand_grid(&f, &torus, &[1.0], &[64]).unwrap();
        // grid agrees with direct evaluation
        for s in [0usize, 5, 33] {
            let th = std::f64::consts::TAU * s as f64 / 64.0;
            let direct = gelfand_eval(&f, &Character::at_z(C::from_polar(1.0, th)).unwrap()).unwrap();
            assert!((grid.values[s] - direct).norm() < 1e-12);
        }
        let back = inverse_gelfand(&grid, &torus, &[(-20, 20)]).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-9);

        let d0 = AlgebraElement::<f64>::delta(&z(), &e(0)).unwrap();
        let g0 = sample_gelfand_grid(&d0, &torus, &[1.0], &[16]).unwrap();
        assert!(inverse_gelfand(&g0, &torus, &[(-3, 3)]).unwrap().max_abs_diff(&d0).unwrap() < 1e-15);

        let zero = GelfandGrid::new(&z(), vec![1.0], vec![16], vec![C::new(0.0, 0.0); 16]).unwrap();
        assert!(inverse_gelfand(&zero, &torus, &[(-3, 3)]).unwrap().is_zero());
    }

    #[test]
    fn inverse_on_annulus_and_aliasing() {
        let ann = character_space(&Weight::exp_z(0.5), 64).unwrap();
        let f = AlgebraElement::laurent(-3, &[C::new(1.0, 0.5), C::new(0.0, 0.0), C::new(-2.0, 0.0), C::new(0.3, 0.0), C::new(0.0, 1.0)]);
        let grid = sample_gelfand_grid(&f, &ann, &[1.4], &[32]).unwrap();
        let back = inverse_gelfand(&grid, &ann, &[(-8, 8)]).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-12);
        assert!(matches!(inverse_gelfand(&grid, &ann, &[(-2, 1)]), Err(Error::Aliasing(_))));
        assert!(matches!(inverse_gelfand(&grid, &ann, &[(-40, 40)]), Err(Error::Aliasing(_))));
        assert!(sample_gelfand_grid(&f, &ann, &[3.0], &[32]).is_err());
    }

    #[test]
    fn grid_csv_header() {
        let torus = CharacterSpace::torus(&z());
        let f = AlgebraElement::<f64>::delta(&z(), &e(1)).unwrap();
        let grid = sample_gelfand_grid(&f, &torus, &[1.0], &[4]).unwrap();
        let mut buf = Vec::new();
        grid.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("angle,radius,re,im\n"));
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn pointwise_product_examples() {
        let unit = Weight::<f64>::unit(&z());
        let a = Character::at_z(C::from_polar(1.0, 0.7)).unwrap();
        let b = Character::at_z(C::from_polar(1.0, -2.1)).unwrap();
        let p = w_pointwise_product(&a, &b, &unit, 6).unwrap();
        assert!(p.multiplicative && p.witness.is_none());

        let one = Character::identity(&z());
        let p = w_pointwise_product(&one, &one, &Weight::exp_z(0.4), 6).unwrap();
        assert!(!p.multiplicative);
        assert_eq!(p.witness, Some((e(1), e(-1))));

        let p = w_pointwise_product(&one, &one, &Weight::poly_z(1.0), 6).unwrap();
        assert!(!p.multiplicative);
        assert_eq!(p.witness, Some((e(1), e(1))));
        let h = |n: i64| p.table.iter().find(|(x, _)| *x == e(n)).unwrap().1;
        assert!((h(2) - C::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((h(1) * h(1) - C::new(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn separating_examples() {
        let torus = CharacterSpace::torus(&z());
        let at = |re: f64, im: f64| Character::at_z(C::new(re, im)).unwrap();

        let f = separating_element(&torus, &[at(1.0, 0.0), at(0.0, 1.0)], &at(-1.0, 0.0)).unwrap();
        assert_eq!(f.len(), 3);
        assert!((gelfand_eval(&f, &at(-1.0, 0.0)).unwrap() - C::new(1.0, 0.0)).norm() < 1e-12);
        assert!(gelfand_eval(&f, &at(1.0, 0.0)).unwrap().norm() < 1e-12);
        assert!(gelfand_eval(&f, &at(0.0, 1.0)).unwrap().norm() < 1e-12);
        // unique degree-2 interpolant: (z - 1)(z - i) / ((-2)(-1 - i))
        let denom = C::new(-2.0, 0.0) * C::new(-1.0, -1.0);
        let want = [C::new(0.0, 1.0) / denom, C::new(-1.0, -1.0) / denom, C::new(1.0, 0.0) / denom];
        for (k, c) in want.iter().enumerate() {
            assert!((f.get(&e(k as i64)) - c).norm() < 1e-12);
        }

        let f = separating_element(&torus, &[], &at(0.0, 1.0)).unwrap();
        assert_eq!(f, AlgebraElement::delta(&z(), &e(0)).unwrap());

        let f = separating_element(&torus, &[at(-1.0, 0.0)], &at(1.0, 0.0)).unwrap();
        let half = AlgebraElement::laurent(0, &[C::new(0.5, 0.0), C::new(0.5, 0.0)]);
        assert!(f.max_abs_diff(&half).unwrap() < 1e-15);
    }

    #[test]
    fn separating_errors() {
        let torus = CharacterSpace::torus(&z());
        let near = |t: f64| Character::on_torus(&z(), &[t], vec![]).unwrap();
        let e = vec![near(0.0), near(1e-4), near(2e-4), near(3e-4)];
        assert!(matches!(separating_element(&torus, &e, &near(0.5)), Err(Error::IllConditioned { .. })));
        assert!(separating_element(&torus, &[near(0.3)], &near(0.3)).is_err());
        let ann = character_space(&Weight::exp_z(0.2), 64).unwrap();
        assert!(matches!(separating_element(&ann, &[], &Character::identity(&z())), Err(Error::Unsupported(_))));
    }

    #[test]
    fn separating_with_torsion() {
        let g = make_group_spec(1, &[4]).unwrap();
        let cs = CharacterSpace::<f64>::torus(&g);
        let e = vec![
            Character::on_torus(&g, &[0.0], vec![0]).unwrap(),
            Character::on_torus(&g, &[0.0], vec![2]).unwrap(),
            Character::on_torus(&g, &[1.0], vec![1]).unwrap(),
        ];
        let phi = Character::on_torus(&g, &[0.0], vec![1]).unwrap();
        let f = separating_element(&cs, &e, &phi).unwrap();
        assert!((gelfand_eval(&f, &phi).unwrap() - C::new(1.0, 0.0)).norm() < 1e-9);
        for c in &e {
            assert!(gelfand_eval(&f, c).unwrap().norm() < 1e-9);
        }
    }

    #[test]
    fn finite_probe_examples() {
        let triv = GroupSpec::trivial();
        let p = finite_gelfand_probe(&triv, &Weight::<f64>::unit(&triv)).unwrap();
        assert_eq!((p.rank, p.order, p.surjective), (1, 1, true));
        assert!(p.isometry_defect.abs() < 1e-12);

        let z2 = GroupSpec::cyclic(2).unwrap();
        let p = finite_gelfand_probe(&z2, &Weight::<f64>::unit(&z2)).unwrap();
        assert!((p.isometry_defect - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert_eq!(p.witness.get(&z2.identity()), C::new(1.0, 0.0));
        assert!((p.witness.get(&z2.generator(0)) - C::new(0.0, 1.0)).norm() < 1e-15);
        assert!((norm_l1w(&p.witness, &Weight::unit(&z2)).unwrap() - 2.0).abs() < 1e-15);

        for g in [GroupSpec::cyclic(4).unwrap(), make_group_spec(0, &[2, 3]).unwrap(), GroupSpec::cyclic(7).unwrap()] {
            let p = finite_gelfand_probe(&g, &Weight::<f64>::unit(&g)).unwrap();
            assert_eq!(p.rank as u64, p.order);
            assert!(p.surjective);
            // flat-spectrum chirp attains sqrt(|G|)
            assert!((p.isometry_defect - ((p.order as f64).sqrt() - 1.0)).abs() < 1e-12);
        }
        assert!(finite_gelfand_probe(&z(), &Weight::<f64>::unit(&z())).is_err());
        let big = GroupSpec::cyclic(5000).unwrap();
        assert!(matches!(finite_gelfand_probe(&big, &Weight::<f64>::unit(&big)), Err(Error::EnumerationCap { .. })));
    }
}

//! Functionals from finitely atomic measures on the character space, Gram
//! positivity tests and character modulation.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::algebra::{norm_l1w, AlgebraElement};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::linalg;
use crate::scalar::{czero, Real};
use crate::spectrum::{gelfand_eval, probe_order, require_valid, Character, CharacterSpace};
use crate::weight::Weight;

/// Largest probe family accepted by [`gram_positivity_check`].
pub const MAX_PROBES: usize = 64;
/// Relative eigenvalue floor for the PSD verdict.
pub const PSD_TOLERANCE: f64 = 1e-9;
/// Largest deviation from `|gamma_j| = 1` accepted by [`translate_character`].
pub const UNIMODULAR_TOLERANCE: f64 = 1e-12;

/// Finite list of `(character, mass)` atoms. Masses may have any sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralMeasure<T> {
    spec: GroupSpec,
    atoms: Vec<(Character<T>, T)>,
}

impl<T: Real> SpectralMeasure<T> {
    /// Validates every atom against `cs` and merges repeated characters.
    pub fn new(cs: &CharacterSpace<T>, atoms: Vec<(Character<T>, T)>) -> Result<Self> {
        let mut merged: Vec<(Character<T>, T)> = Vec::with_capacity(atoms.len());
        for (chi, mass) in atoms {
            require_valid(cs, &chi)?;
            if !mass.is_finite() {
                return Err(Error::NonFinite(format!("mass {mass}")));
            }
            match merged.iter_mut().find(|(c, _)| *c == chi) {
                Some((_, m)) => *m = *m + mass,
                None => merged.push((chi, mass)),
            }
        }
        Ok(SpectralMeasure { spec: cs.spec().clone(), atoms: merged })
    }

    pub fn zero(spec: &GroupSpec) -> Self {
        SpectralMeasure { spec: spec.clone(), atoms: Vec::new() }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn atoms(&self) -> &[(Character<T>, T)] {
        &self.atoms
    }

    /// `mu + nu`, merging shared atoms.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::GroupMismatch { expected: self.spec.to_string(), detail: format!("measure on {}", other.spec) });
        }
        let mut atoms = self.atoms.clone();
        for (chi, mass) in &other.atoms {
            match atoms.iter_mut().find(|(c, _)| c == chi) {
                Some((_, m)) => *m = *m + *mass,
                None => atoms.push((chi.clone(), *mass)),
            }
        }
        Ok(SpectralMeasure { spec: self.spec.clone(), atoms })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.atoms.iter().all(|(_, m)| *m >= T::zero())
    }

    pub fn on_torus(&self) -> bool {
        self.atoms.iter().all(|(c, _)| c.is_unimodular(T::lit(crate::spectrum::MODULUS_TOLERANCE)))
    }
}

/// `phi(f) = sum_i c_i f^(chi_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Functional<T> {
    spec: GroupSpec,
    atoms: Vec<(Character<T>, T)>,
}

impl<T: Real> Functional<T> {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn atoms(&self) -> &[(Character<T>, T)] {
        &self.atoms
    }

    pub fn eval(&self, f: &AlgebraElement<T>) -> Result<Complex<T>> {
        if f.spec() != &self.spec {
            return Err(Error::GroupMismatch { expected: self.spec.to_string(), detail: format!("element on {}", f.spec()) });
        }
        let mut acc = czero();
        for (chi, c) in &self.atoms {
            acc = acc + gelfand_eval(f, chi)? * *c;
        }
        Ok(acc)
    }

    /// `sum |c_i|`: a bound for `|phi(f)| / ||f||_{1,w}`, since every valid
    /// character satisfies `|chi(x)| <= w(x)`.
    pub fn continuity_constant(&self) -> T {
        self.atoms.iter().map(|(_, c)| c.abs()).sum()
    }

    pub fn on_torus(&self) -> bool {
        self.atoms.iter().all(|(c, _)| c.is_unimodular(T::lit(crate::spectrum::MODULUS_TOLERANCE)))
    }
}

/// Integration against `mu`; atoms were validated when `mu` was built.
pub fn synthesize_functional<T: Real>(mu: &SpectralMeasure<T>) -> Functional<T> {
    Functional { spec: mu.spec.clone(), atoms: mu.atoms.clone() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramCheck<T> {
    /// Row-major `G_jk = phi(f_j * f_k^*)`.
    pub matrix: Vec<Complex<T>>,
    pub size: usize,
    /// Eigenvalues of the Hermitian part, ascending.
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub frobenius_norm: f64,
    pub psd: bool,
    pub hermitian: bool,
    /// All atoms unimodular; PSD is only guaranteed for nonnegative masses in this case.
    pub torus_atoms: bool,
}

/// Builds `G_jk = phi(f_j * f_k^*)` by convolution and tests it for positive
/// semidefiniteness: `min eigenvalue >= -1e-9 ||G||_F`.
pub fn gram_positivity_check<T: Real>(phi: &Functional<T>, probes: &[AlgebraElement<T>]) -> Result<GramCheck<T>> {
    let n = probes.len();
    if n == 0 || n > MAX_PROBES {
        return Err(Error::InvalidArgument(format!("need between 1 and {MAX_PROBES} probes, got {n}")));
    }
    let stars: Vec<AlgebraElement<T>> = probes.iter().map(|f| f.involution()).collect();
    let mut matrix = vec![czero::<T>(); n * n];
    for j in 0..n {
        for k in 0..n {
            matrix[j * n + k] = phi.eval(&probes[j].convolve(&stars[k])?)?;
        }
    }
    let frobenius_norm = matrix.iter().map(|z| z.norm_sqr().as_f64()).sum::<f64>().sqrt();
    let mut asym = 0.0f64;
    for j in 0..n {
        for k in 0..n {
            asym = asym.max((matrix[j * n + k] - matrix[k * n + j].conj()).norm().as_f64());
        }
    }
    let eigenvalues = linalg::hermitian_eigenvalues(n, &matrix);
    let min_eigenvalue = eigenvalues.first().copied().unwrap_or(0.0);
    let floor = PSD_TOLERANCE * frobenius_norm;
    Ok(GramCheck {
        matrix,
        size: n,
        eigenvalues,
        min_eigenvalue,
        frobenius_norm,
        psd: min_eigenvalue >= -floor,
        hermitian: asym <= floor.max(f64::MIN_POSITIVE),
        torus_atoms: phi.on_torus(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Modulation<T> {
    /// `g(x) = chi(x) f(x)`, read in unweighted `l1`.
    pub g: AlgebraElement<T>,
    pub norm_l1: T,
    pub norm_l1w: T,
    /// `||g||_1 <= ||f||_{1,w} + 1e-12`.
    pub norm_bound_ok: bool,
}

/// Multiplies `f` pointwise by `chi`. The caller validates `chi`; an invalid
/// character shows up as a failed norm bound.
pub fn modulate<T: Real>(f: &AlgebraElement<T>, chi: &Character<T>, w: &Weight<T>) -> Result<Modulation<T>> {
    if f.spec() != chi.spec() || f.spec() != w.spec() {
        return Err(Error::GroupMismatch { expected: f.spec().to_string(), detail: "character or weight on another group".into() });
    }
    let mut terms = Vec::with_capacity(f.len());
    for (x, a) in f.terms() {
        terms.push((x.clone(), *a * chi.eval(x)?));
    }
    let g = AlgebraElement::from_terms(f.spec(), terms)?;
    let norm_l1 = g.norm_l1();
    let weighted = norm_l1w(f, w)?;
    let norm_bound_ok = norm_l1 <= weighted + T::lit(1e-12);
    Ok(Modulation { g, norm_l1, norm_l1w: weighted, norm_bound_ok })
}

/// `gamma chi` for a unimodular `gamma`; the result stays in `cs`.
pub fn translate_character<T: Real>(
    gamma: &Character<T>,
    chi: &Character<T>,
    cs: &CharacterSpace<T>,
) -> Result<Character<T>> {
    if gamma.spec() != cs.spec() {
        return Err(Error::GroupMismatch { expected: cs.spec().to_string(), detail: format!("gamma on {}", gamma.spec()) });
    }
    if !gamma.is_unimodular(T::lit(UNIMODULAR_TOLERANCE)) {
        return Err(Error::InvalidCharacter("gamma must have |z_j| = 1 on every free axis".into()));
    }
    if gamma.torsion.iter().zip(&cs.cycles).any(|(k, m)| k >= m) {
        return Err(Error::InvalidCharacter("gamma has an unreduced torsion index".into()));
    }
    require_valid(cs, chi)?;
    let free = gamma.free.iter().zip(&chi.free).map(|(a, b)| *a * *b).collect();
    let torsion = gamma.torsion.iter().zip(&chi.torsion).zip(&cs.cycles).map(|((a, b), m)| (a + b) % m).collect();
    Character::new(cs.spec(), free, torsion)
}

/// First `x` in the probe ball (ordered `0, 1, -1, 2, ...` by max-norm) with
/// `phi(delta_x) != psi(delta_x)` beyond `1e-9` relative.
pub fn distinguishing_monomial<T: Real>(
    phi: &Functional<T>,
    psi: &Functional<T>,
    radius: u64,
) -> Result<Option<crate::group::GroupElement>> {
    if phi.spec() != psi.spec() {
        return Err(Error::GroupMismatch { expected: phi.spec().to_string(), detail: format!("functional on {}", psi.spec()) });
    }
    let scale = T::one().max(phi.continuity_constant()).max(psi.continuity_constant());
    for x in probe_order(phi.spec(), radius)? {
        let d = AlgebraElement::delta(phi.spec(), &x)?;
        if (phi.eval(&d)? - psi.eval(&d)?).norm() > T::lit(1e-9) * scale {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

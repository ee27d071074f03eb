//! Submultiplicative weights on `G`, the weight spectral radius
//! `r_w(x) = lim w(n x)^(1/n)`, Beurling-Domar partial sums and the
//! regular/nonquasianalytic classifier.
//!
//! Every weight is a product of per-axis factors. On a torsion axis the
//! built-in families see the cyclic distance `min(t, m - t)`, which is
//! subadditive, so submultiplicativity carries over from `Z`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{enumerate_ball, GroupElement, GroupSpec};
use crate::scalar::Real;

/// Relative slack in the submultiplicativity test.
pub const SUBMULT_REL_EPS: f64 = 1e-12;
/// Default tolerance for `r_w`-based verdicts.
pub const DEFAULT_TOLERANCE: f64 = 1e-3;
/// Default top of the doubling ladder for `r_w`.
pub const DEFAULT_MAX_EXPONENT: u64 = 1 << 20;
/// Domar ladder used by the classifier; the last rung is twice the previous.
pub const CLASSIFY_DOMAR_LADDER: [u64; 5] = [10, 100, 1_000, 10_000, 20_000];

/// Behaviour of a windowed table on a free axis outside its window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extension {
    /// Queries outside the window are domain errors.
    Strict,
    /// Repeat the boundary value.
    Edge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableAxis<T> {
    /// Index of `values[0]`; always 0 on torsion axes.
    pub start: i64,
    pub values: Vec<T>,
    pub extension: Extension,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisWeight<T> {
    Constant(T),
    /// `(1 + |n|)^alpha`
    Poly { alpha: T },
    /// `exp(a |n|)`
    Exp { a: T },
    /// `exp(a |n|^beta)`, `0 < beta < 1`
    SubExp { a: T, beta: T },
    Table(TableAxis<T>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Weight<T> {
    spec: GroupSpec,
    axes: Vec<AxisWeight<T>>,
}

impl<T: Real> AxisWeight<T> {
    fn validate(&self, torsion_order: Option<u64>) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        let ok = |x: T| x.is_finite();
        match self {
            AxisWeight::Constant(c) if !(ok(*c) && *c > T::zero()) => bad(format!("constant {c} must be positive")),
            AxisWeight::Poly { alpha } if !(ok(*alpha) && *alpha >= T::zero()) => {
                bad(format!("poly exponent {alpha} must be >= 0"))
            }
            AxisWeight::Exp { a } if !(ok(*a) && *a >= T::zero()) => bad(format!("exp rate {a} must be >= 0")),
            AxisWeight::SubExp { a, beta }
                if !(ok(*a) && *a >= T::zero() && *beta > T::zero() && *beta < T::one()) =>
            {
                bad(format!("subexp needs a >= 0 and 0 < beta < 1, got a={a}, beta={beta}"))
            }
            AxisWeight::Table(t) => {
                if t.values.is_empty() {
                    return bad("empty table".into());
                }
                if let Some(v) = t.values.iter().find(|v| !(v.is_finite() && **v > T::zero())) {
                    return bad(format!("table value {v} must be positive and finite"));
                }
                if let Some(m) = torsion_order {
                    if t.start != 0 || t.values.len() as u64 != m {
                        return bad(format!("table on Z_{m} needs exactly {m} values starting at 0"));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `ln` of the factor at free coordinate `n`, or at residue `n` of `Z_m`.
    fn ln_at(&self, n: i64, torsion_order: Option<u64>) -> std::result::Result<T, String> {
        let dist = match torsion_order {
            Some(m) => {
                let t = n.rem_euclid(m as i64) as u64;
                t.min(m - t) as f64
            }
            None => n.unsigned_abs() as f64,
        };
        let d = T::lit(dist);
        Ok(match self {
            AxisWeight::Constant(c) => c.ln(),
            AxisWeight::Poly { alpha } => *alpha * d.ln_1p(),
            AxisWeight::Exp { a } => *a * d,
            AxisWeight::SubExp { a, beta } => *a * d.powf(*beta),
            AxisWeight::Table(t) => t.lookup(n, torsion_order)?.ln(),
        })
    }

    fn value_at(&self, n: i64, torsion_order: Option<u64>) -> std::result::Result<T, String> {
        match self {
            AxisWeight::Constant(c) => Ok(*c),
            AxisWeight::Poly { alpha } => {
                let dist = match torsion_order {
                    Some(m) => {
                        let t = n.rem_euclid(m as i64) as u64;
                        t.min(m - t) as f64
                    }
                    None => n.unsigned_abs() as f64,
                };
                Ok((T::one() + T::lit(dist)).powf(*alpha))
            }
            AxisWeight::Table(t) => t.lookup(n, torsion_order),
            _ => self.ln_at(n, torsion_order).map(|l| l.exp()),
        }
    }

    /// `lim_n factor(n s)^(1/n)` when a closed form exists.
    fn closed_form_radius(&self, step: i64, torsion_order: Option<u64>) -> Option<T> {
        if torsion_order.is_some() || step == 0 {
            // bounded positive sequence, n-th root tends to 1
            return Some(T::one());
        }
        match self {
            AxisWeight::Exp { a } => Some((*a * T::lit(step.unsigned_abs() as f64)).exp()),
            AxisWeight::Table(t) if t.extension == Extension::Strict => None,
            _ => Some(T::one()),
        }
    }

    pub fn is_table(&self) -> bool {
        matches!(self, AxisWeight::Table(_))
    }

    fn scaled(&self, by: T) -> Self {
        match self {
            AxisWeight::Constant(c) => AxisWeight::Constant(*c / by),
            AxisWeight::Table(t) => AxisWeight::Table(TableAxis {
                start: t.start,
                values: t.values.iter().map(|v| *v / by).collect(),
                extension: t.extension,
            }),
            other => other.clone(),
        }
    }
}

impl<T: Real> TableAxis<T> {
    fn lookup(&self, n: i64, torsion_order: Option<u64>) -> std::result::Result<T, String> {
        if let Some(m) = torsion_order {
            return Ok(self.values[n.rem_euclid(m as i64) as usize]);
        }
        let last = self.start + self.values.len() as i64 - 1;
        let idx = match self.extension {
            Extension::Edge => n.clamp(self.start, last),
            Extension::Strict if n < self.start || n > last => {
                return Err(format!("index {n} outside table window [{}, {last}]", self.start));
            }
            Extension::Strict => n,
        };
        Ok(self.values[(idx - self.start) as usize])
    }
}

impl<T: Real> Weight<T> {
    pub fn new(spec: GroupSpec, axes: Vec<AxisWeight<T>>) -> Result<Self> {
        if axes.len() != spec.rank() {
            return Err(Error::InvalidArgument(format!(
                "weight has {} axis factors but group {spec} has {} axes",
                axes.len(),
                spec.rank()
            )));
        }
        for (i, ax) in axes.iter().enumerate() {
            ax.validate(torsion_order_of(&spec, i))?;
        }
        Ok(Weight { spec, axes })
    }

    /// `w == 1` on every axis.
    pub fn unit(spec: &GroupSpec) -> Self {
        let axes = (0..spec.rank()).map(|_| AxisWeight::Constant(T::one())).collect();
        Weight { spec: spec.clone(), axes }
    }

    /// `(1 + |n|)^alpha` on `Z`.
    pub fn poly_z(alpha: T) -> Self {
        Weight { spec: GroupSpec::integers(), axes: vec![AxisWeight::Poly { alpha }] }
    }

    /// `exp(a |n|)` on `Z`.
    pub fn exp_z(a: T) -> Self {
        Weight { spec: GroupSpec::integers(), axes: vec![AxisWeight::Exp { a }] }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn axes(&self) -> &[AxisWeight<T>] {
        &self.axes
    }

    /// True when every free axis uses a built-in family (tables only on torsion axes).
    pub fn is_family(&self) -> bool {
        self.axes[..self.spec.free_rank()].iter().all(|a| !a.is_table())
    }

    pub fn evaluate(&self, x: &GroupElement) -> Result<T> {
        self.spec.check(x)?;
        self.evaluate_parts(&x.free, &x.torsion)
            .map_err(|detail| Error::WeightDomain { at: x.clone(), detail })
    }

    pub fn ln_value(&self, x: &GroupElement) -> Result<T> {
        self.spec.check(x)?;
        self.ln_parts(&x.free, &x.torsion)
            .map_err(|detail| Error::WeightDomain { at: x.clone(), detail })
    }

    fn evaluate_parts(&self, free: &[i64], torsion: &[u64]) -> std::result::Result<T, String> {
        let mut acc = T::one();
        for (i, ax) in self.axes.iter().enumerate() {
            let (n, m) = self.axis_coord(i, free, torsion);
            acc = acc * ax.value_at(n, m)?;
        }
        Ok(acc)
    }

    fn ln_parts(&self, free: &[i64], torsion: &[u64]) -> std::result::Result<T, String> {
        let mut acc = T::zero();
        for (i, ax) in self.axes.iter().enumerate() {
            let (n, m) = self.axis_coord(i, free, torsion);
            acc = acc + ax.ln_at(n, m)?;
        }
        Ok(acc)
    }

    #[inline]
    fn axis_coord(&self, i: usize, free: &[i64], torsion: &[u64]) -> (i64, Option<u64>) {
        let d = self.spec.free_rank();
        if i < d {
            (free[i], None)
        } else {
            (torsion[i - d] as i64, Some(self.spec.torsion_orders()[i - d]))
        }
    }

    /// Closed-form `r_w(x)` for product weights, if every axis admits one.
    pub fn closed_form_radius(&self, x: &GroupElement) -> Option<T> {
        let mut acc = T::one();
        for (i, ax) in self.axes.iter().enumerate() {
            let (n, m) = self.axis_coord(i, &x.free, &x.torsion);
            acc = acc * ax.closed_form_radius(n, m)?;
        }
        Some(acc)
    }

    /// Divides every axis by its value at 0, so the result has `w(0) = 1`.
    /// Returns the new weight and the per-axis divisors.
    pub fn rescaled(&self) -> (Self, Vec<T>) {
        let mut factors = Vec::with_capacity(self.axes.len());
        let axes = self
            .axes
            .iter()
            .enumerate()
            .map(|(i, ax)| {
                let f = ax.value_at(0, torsion_order_of(&self.spec, i)).unwrap_or(T::one());
                factors.push(f);
                ax.scaled(f)
            })
            .collect();
        (Weight { spec: self.spec.clone(), axes }, factors)
    }
}

fn torsion_order_of(spec: &GroupSpec, axis: usize) -> Option<u64> {
    axis.checked_sub(spec.free_rank()).map(|i| spec.torsion_orders()[i])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "result")]
pub enum SubmultiplicativeCheck {
    Pass,
    Counterexample { x: GroupElement, y: GroupElement, ratio: f64 },
}

impl SubmultiplicativeCheck {
    pub fn passed(&self) -> bool {
        matches!(self, SubmultiplicativeCheck::Pass)
    }
}

/// Exhaustive `w(x + y) <= w(x) w(y) (1 + 1e-12)` over the ball of the given radius.
pub fn check_submultiplicative<T: Real>(w: &Weight<T>, radius: u64) -> Result<SubmultiplicativeCheck> {
    let spec = w.spec();
    let ball = enumerate_ball(spec, radius)?;
    let ln_ball: Vec<T> = ball.iter().map(|x| w.ln_value(x)).collect::<Result<_>>()?;
    let slack = T::lit(SUBMULT_REL_EPS).ln_1p();
    let mut free = vec![0i64; spec.free_rank()];
    let mut torsion = vec![0u64; spec.torsion_orders().len()];
    for (x, lx) in ball.iter().zip(&ln_ball) {
        for (y, ly) in ball.iter().zip(&ln_ball) {
            for (k, f) in free.iter_mut().enumerate() {
                *f = x.free[k] + y.free[k];
            }
            for (k, t) in torsion.iter_mut().enumerate() {
                *t = (x.torsion[k] + y.torsion[k]) % spec.torsion_orders()[k];
            }
            let lsum = w.ln_parts(&free, &torsion).map_err(|detail| Error::WeightDomain {
                at: GroupElement { free: free.clone(), torsion: torsion.clone() },
                detail,
            })?;
            let excess = lsum - *lx - *ly;
            if excess > slack {
                return Ok(SubmultiplicativeCheck::Counterexample {
                    x: x.clone(),
                    y: y.clone(),
                    ratio: excess.exp().as_f64(),
                });
            }
        }
    }
    Ok(SubmultiplicativeCheck::Pass)
}

/// Result of the doubling-ladder estimate of `r_w(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate<T> {
    /// `min` over the ladder of `w(n x)^(1/n)`: an upper bound on `r_w(x)`.
    pub estimate: T,
    pub n_reached: u64,
    /// Closed-form limit, when the family provides one.
    pub exact: Option<T>,
    /// `(n, w(n x)^(1/n))` for every rung evaluated.
    pub ladder: Vec<(u64, T)>,
    /// `ln w(n x)` at the top rung; tracks `lim w(n x)` as opposed to its n-th root.
    pub top_ln_weight: T,
}

impl<T: Real> RadiusEstimate<T> {
    /// Closed form when available, else the ladder bound.
    pub fn value(&self) -> T {
        self.exact.unwrap_or(self.estimate)
    }

    /// `w(n x)^(1/n)` at the largest `n` reached.
    pub fn top_value(&self) -> T {
        self.ladder.last().map(|p| p.1).unwrap_or(self.estimate)
    }
}

/// `r_w(x)` on the ladder `n = 1, 2, 4, ... <= max_exponent`.
///
/// `ln w(n x)` is subadditive in `n`, so `r_w(x) = inf_n w(n x)^(1/n)` and the
/// ladder minimum is a certified upper bound. Windowed strict tables stop the
/// ladder at the first rung leaving the window.
pub fn weight_radius<T: Real>(w: &Weight<T>, x: &GroupElement, max_exponent: u64) -> Result<RadiusEstimate<T>> {
    if max_exponent < 2 {
        return Err(Error::InvalidArgument(format!("max_exponent must be >= 2, got {max_exponent}")));
    }
    let spec = w.spec();
    spec.check(x)?;
    let mut ladder = Vec::new();
    let mut estimate = T::infinity();
    let mut top_ln = T::zero();
    let mut n: u64 = 1;
    while n <= max_exponent {
        let step = i64::try_from(n).map_err(|_| Error::Overflow(format!("exponent {n}")))?;
        let nx = spec.multiple(x, step)?;
        let ln = match w.ln_value(&nx) {
            Ok(v) => v,
            Err(Error::WeightDomain { .. }) if !ladder.is_empty() => break,
            Err(e) => return Err(e),
        };
        if !ln.is_finite() {
            return Err(Error::NonFinite(format!("ln w({nx})")));
        }
        let v = (ln / T::lit(n as f64)).exp();
        estimate = estimate.min(v);
        ladder.push((n, v));
        top_ln = ln;
        match n.checked_mul(2) {
            Some(next) => n = next,
            None => break,
        }
    }
    let n_reached = ladder.last().map(|p| p.0).unwrap_or(0);
    Ok(RadiusEstimate { estimate, n_reached, exact: w.closed_form_radius(x), ladder, top_ln_weight: top_ln })
}

/// Two-sided Beurling-Domar partial sums
/// `S_N = sum_{n=1..N} [ln w(n x) + ln w(-n x)] / (1 + n^2)` at each `N` of the ladder.
pub fn bd_partial_sums<T: Real>(w: &Weight<T>, x: &GroupElement, n_ladder: &[u64]) -> Result<Vec<(u64, T)>> {
    if n_ladder.is_empty() || n_ladder[0] < 1 || n_ladder.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidArgument(format!("ladder must be ascending with N >= 1: {n_ladder:?}")));
    }
    let spec = w.spec();
    spec.check(x)?;
    let mut out = Vec::with_capacity(n_ladder.len());
    let mut rungs = n_ladder.iter().peekable();
    // Neumaier summation; fixed order n = 1, 2, ...
    let (mut sum, mut comp) = (T::zero(), T::zero());
    let top = *n_ladder.last().unwrap();
    for n in 1..=top {
        let step = i64::try_from(n).map_err(|_| Error::Overflow(format!("index {n}")))?;
        let mut term = T::zero();
        for s in [step, -step] {
            let y = spec.multiple(x, s)?;
            let ln = w.ln_value(&y)?;
            if ln < T::zero() {
                return Err(Error::WeightBelowOne { at: y, value: ln.exp().as_f64() });
            }
            term = term + ln;
        }
        let nf = T::lit(n as f64);
        let term = term / (T::one() + nf * nf);
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp = comp + ((sum - t) + term);
        } else {
            comp = comp + ((term - t) + sum);
        }
        sum = t;
        if rungs.peek() == Some(&&n) {
            out.push((n, sum + comp));
            rungs.next();
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    RegularNonquasianalytic,
    NotRegular,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::RegularNonquasianalytic => "regular_nonquasianalytic",
            Verdict::NotRegular => "not_regular",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusEvidence<T> {
    pub generator: GroupElement,
    pub estimate: T,
    pub top_value: T,
    pub n_reached: u64,
    pub exact: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomarEvidence<T> {
    pub generator: GroupElement,
    pub sums: Vec<(u64, T)>,
    /// `|S_2N - S_N|` at the top rung.
    pub cauchy_gap: Option<T>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport<T> {
    pub verdict: Verdict,
    pub family_exact: bool,
    pub tolerance: T,
    pub radius_evidence: Vec<RadiusEvidence<T>>,
    pub domar_evidence: Vec<DomarEvidence<T>>,
    /// Per-axis divisors applied when `inf w < 1` on the sample ball.
    pub rescaled_by: Option<Vec<T>>,
    pub notes: Vec<String>,
}

/// Probe generators: `+-e_j` on free axes, `e_i` on torsion axes, identity for the trivial group.
fn probe_generators(spec: &GroupSpec) -> Vec<GroupElement> {
    let mut gens = Vec::new();
    for j in 0..spec.free_rank() {
        let e = spec.generator(j);
        gens.push(e.clone());
        gens.push(spec.neg(&e).expect("generator belongs to spec"));
    }
    for i in 0..spec.torsion_orders().len() {
        gens.push(spec.generator(spec.free_rank() + i));
    }
    if gens.is_empty() {
        gens.push(spec.identity());
    }
    gens
}

/// Ball radius used for the classifier's sampled checks.
pub fn default_check_radius(spec: &GroupSpec) -> u64 {
    spec.radius_for_budget(16, 1024)
}

/// Classifies `w` as regular/nonquasianalytic, not regular, or inconclusive.
///
/// Weights built only from the closed-form families get exact verdicts; a
/// windowed table on a free axis gets a heuristic verdict from the `r_w`
/// ladder and the Cauchy behaviour of the Domar sums.
pub fn classify_weight<T: Real>(w: &Weight<T>, tolerance: T) -> Result<ClassificationReport<T>> {
    let spec = w.spec();
    let radius = default_check_radius(spec);
    if let SubmultiplicativeCheck::Counterexample { x, y, ratio } = check_submultiplicative(w, radius)? {
        return Err(Error::NotSubmultiplicative { x, y, ratio });
    }

    let mut notes = Vec::new();
    let ball = enumerate_ball(spec, radius)?;
    let mut inf = T::infinity();
    for x in &ball {
        inf = inf.min(w.ln_value(x)?);
    }
    let (w, rescaled_by) = if inf < T::zero() {
        let (r, f) = w.rescaled();
        notes.push("inf w < 1 on the sample ball; weight rescaled axis-wise to w(0) = 1".to_string());
        (r, Some(f))
    } else {
        (w.clone(), None)
    };

    let gens = probe_generators(spec);
    let mut radius_evidence = Vec::with_capacity(gens.len());
    for g in &gens {
        let r = weight_radius(&w, g, DEFAULT_MAX_EXPONENT)?;
        let near_one = (r.value() - T::one()).abs() <= tolerance;
        let raw_limit = r.top_ln_weight.exp();
        if near_one && (raw_limit - T::one()).abs() > tolerance {
            notes.push(format!(
                "at {g}: w(n x)^(1/n) -> 1 but w(n x) = {raw_limit:.6e} at n = {}; the conditions lim w(n x) = 1 and lim w(n x)^(1/n) = 1 disagree",
                r.n_reached
            ));
        }
        radius_evidence.push(RadiusEvidence {
            generator: g.clone(),
            estimate: r.estimate,
            top_value: r.top_value(),
            n_reached: r.n_reached,
            exact: r.exact,
        });
    }

    // one Domar series per axis: the two-sided sum already covers -e_j
    let domar_gens: Vec<&GroupElement> = gens
        .iter()
        .filter(|g| g.free.iter().all(|&c| c >= 0))
        .collect();
    let mut domar_evidence = Vec::with_capacity(domar_gens.len());
    for g in domar_gens {
        match bd_partial_sums(&w, g, &CLASSIFY_DOMAR_LADDER) {
            Ok(sums) => {
                let k = sums.len();
                let gap = (sums[k - 1].1 - sums[k - 2].1).abs();
                domar_evidence.push(DomarEvidence { generator: g.clone(), sums, cauchy_gap: Some(gap), error: None });
            }
            Err(e @ (Error::WeightBelowOne { .. } | Error::WeightDomain { .. })) => {
                domar_evidence.push(DomarEvidence {
                    generator: g.clone(),
                    sums: Vec::new(),
                    cauchy_gap: None,
                    error: Some(e.to_string()),
                });
            }
            Err(e) => return Err(e),
        }
    }

    let family_exact = w.is_family();
    let verdict = if family_exact {
        let diverges = w.axes()[..spec.free_rank()]
            .iter()
            .any(|a| matches!(a, AxisWeight::Exp { a } if *a > T::zero()));
        if diverges {
            Verdict::NotRegular
        } else {
            Verdict::RegularNonquasianalytic
        }
    } else {
        let radii_ok = radius_evidence.iter().all(|r| r.estimate <= T::one() + tolerance);
        let domar_ok = domar_evidence
            .iter()
            .all(|d| d.cauchy_gap.map(|g| g < tolerance).unwrap_or(false));
        let growth = T::one() + T::lit(10.0) * tolerance;
        if radii_ok && domar_ok {
            Verdict::RegularNonquasianalytic
        } else if radius_evidence.iter().any(|r| r.top_value >= growth) {
            Verdict::NotRegular
        } else {
            Verdict::Inconclusive
        }
    };

    Ok(ClassificationReport {
        verdict,
        family_exact,
        tolerance,
        radius_evidence,
        domar_evidence,
        rescaled_by,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightDiagnostics<T> {
    /// `sup w(x) w(-x)` over the ball.
    pub sup_wstar: T,
    pub sup_wstar_at: GroupElement,
    /// `inf w(x + y) / (w(x) w(y))` over pairs in the ball.
    pub inf_omega: T,
    pub inf_omega_at: (GroupElement, GroupElement),
}

/// Scans `w*` and `Omega` over the ball. Report only.
pub fn weight_diagnostics<T: Real>(w: &Weight<T>, radius: u64) -> Result<WeightDiagnostics<T>> {
    let spec = w.spec();
    let ball = enumerate_ball(spec, radius)?;
    let vals: Vec<T> = ball.iter().map(|x| w.evaluate(x)).collect::<Result<_>>()?;
    let mut sup_wstar = T::neg_infinity();
    let mut sup_at = spec.identity();
    for (x, wx) in ball.iter().zip(&vals) {
        let ws = *wx * w.evaluate(&spec.neg(x)?)?;
        if ws > sup_wstar {
            sup_wstar = ws;
            sup_at = x.clone();
        }
    }
    let mut inf_omega = T::infinity();
    let mut inf_at = (spec.identity(), spec.identity());
    for (x, wx) in ball.iter().zip(&vals) {
        for (y, wy) in ball.iter().zip(&vals) {
            let om = w.evaluate(&spec.add(x, y)?)? / (*wx * *wy);
            if om < inf_omega {
                inf_omega = om;
                inf_at = (x.clone(), y.clone());
            }
        }
    }
    Ok(WeightDiagnostics { sup_wstar, sup_wstar_at: sup_at, inf_omega, inf_omega_at: inf_at })
}

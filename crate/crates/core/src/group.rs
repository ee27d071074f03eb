//! Finitely generated Abelian groups `Z^d x Z_m1 x ... x Z_mk`, written additively.
//!
//! Dictionary with multiplicative notation: `xy -> x + y`, `x^-1 -> -x`,
//! `x^n -> n * x`. Free coordinates are `i64` with checked arithmetic; torsion
//! coordinates are residues in `[0, m_i)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of elements an enumeration may produce.
pub const DEFAULT_ELEMENT_CAP: u64 = 10_000_000;

/// Environment variable overriding [`DEFAULT_ELEMENT_CAP`].
pub const CAP_ENV_VAR: &str = "WGA_CAP_ELEMENTS";

/// The enumeration cap in effect: `WGA_CAP_ELEMENTS` if set and parseable.
pub fn element_cap() -> u64 {
    std::env::var(CAP_ENV_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ELEMENT_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    free_rank: usize,
    torsion_orders: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub free: Vec<i64>,
    pub torsion: Vec<u64>,
}

/// Action for [`op_elements`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementAction {
    Add,
    Inverse,
    Multiple(i64),
}

/// Validating constructor taking signed inputs, as they arrive from text.
pub fn make_group_spec(free_rank: i64, torsion: &[i64]) -> Result<GroupSpec> {
    if free_rank < 0 {
        return Err(Error::NegativeRank(free_rank));
    }
    let mut orders = Vec::with_capacity(torsion.len());
    for &m in torsion {
        if m < 2 {
            return Err(Error::InvalidTorsionOrder(m));
        }
        orders.push(m as u64);
    }
    Ok(GroupSpec { free_rank: free_rank as usize, torsion_orders: orders })
}

pub fn op_elements(
    spec: &GroupSpec,
    a: &GroupElement,
    b: &GroupElement,
    action: ElementAction,
) -> Result<GroupElement> {
    match action {
        ElementAction::Add => spec.add(a, b),
        ElementAction::Inverse => spec.neg(a),
        ElementAction::Multiple(n) => spec.multiple(a, n),
    }
}

impl GroupSpec {
    pub fn new(free_rank: usize, torsion_orders: Vec<u64>) -> Result<Self> {
        if let Some(&m) = torsion_orders.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidTorsionOrder(m as i64));
        }
        Ok(GroupSpec { free_rank, torsion_orders })
    }

    /// `Z`.
    pub fn integers() -> Self {
        GroupSpec { free_rank: 1, torsion_orders: Vec::new() }
    }

    pub fn trivial() -> Self {
        GroupSpec { free_rank: 0, torsion_orders: Vec::new() }
    }

    pub fn cyclic(m: u64) -> Result<Self> {
        Self::new(0, vec![m])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_orders(&self) -> &[u64] {
        &self.torsion_orders
    }

    /// Number of axes (free plus torsion).
    pub fn rank(&self) -> usize {
        self.free_rank + self.torsion_orders.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion_orders.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// `|G|` for a finite group, saturating at `u128::MAX`.
    pub fn order(&self) -> Option<u128> {
        if !self.is_finite() {
            return None;
        }
        Some(self.torsion_product())
    }

    fn torsion_product(&self) -> u128 {
        self.torsion_orders
            .iter()
            .fold(1u128, |acc, &m| acc.saturating_mul(m as u128))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            free: vec![0; self.free_rank],
            torsion: vec![0; self.torsion_orders.len()],
        }
    }

    /// Builds an element, reducing torsion coordinates modulo their orders.
    pub fn element(&self, free: &[i64], torsion: &[i64]) -> Result<GroupElement> {
        if free.len() != self.free_rank || torsion.len() != self.torsion_orders.len() {
            return Err(self.mismatch(format!(
                "expected {} free and {} torsion coordinates, got {} and {}",
                self.free_rank,
                self.torsion_orders.len(),
                free.len(),
                torsion.len()
            )));
        }
        let torsion = torsion
            .iter()
            .zip(&self.torsion_orders)
            .map(|(&t, &m)| t.rem_euclid(m as i64) as u64)
            .collect();
        Ok(GroupElement { free: free.to_vec(), torsion })
    }

    /// Element from a flat coordinate list: free coordinates first, then torsion.
    pub fn element_from_coords(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(self.mismatch(format!(
                "expected {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        let (f, t) = coords.split_at(self.free_rank);
        self.element(f, t)
    }

    /// Unit vector along axis `axis` (free axes first).
    pub fn generator(&self, axis: usize) -> GroupElement {
        let mut e = self.identity();
        if axis < self.free_rank {
            e.free[axis] = 1;
        } else {
            e.torsion[axis - self.free_rank] = 1;
        }
        e
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.free.len() == self.free_rank
            && x.torsion.len() == self.torsion_orders.len()
            && x.torsion.iter().zip(&self.torsion_orders).all(|(t, m)| t < m)
    }

    pub fn check(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(self.mismatch(format!("{x}")))
        }
    }

    fn mismatch(&self, detail: String) -> Error {
        Error::GroupMismatch { expected: self.to_string(), detail }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        let free = a
            .free
            .iter()
            .zip(&b.free)
            .map(|(x, y)| x.checked_add(*y).ok_or_else(|| Error::Overflow(format!("{x} + {y}"))))
            .collect::<Result<_>>()?;
        let torsion = a
            .torsion
            .iter()
            .zip(&b.torsion)
            .zip(&self.torsion_orders)
            .map(|((x, y), m)| (x + y) % m)
            .collect();
        Ok(GroupElement { free, torsion })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.multiple(a, -1)
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.add(a, &self.neg(b)?)
    }

    /// `n * a` for any integer `n`; overflow of a free coordinate is an error.
    pub fn multiple(&self, a: &GroupElement, n: i64) -> Result<GroupElement> {
        self.check(a)?;
        let free = a
            .free
            .iter()
            .map(|x| x.checked_mul(n).ok_or_else(|| Error::Overflow(format!("{n} * {x}"))))
            .collect::<Result<_>>()?;
        let torsion = a
            .torsion
            .iter()
            .zip(&self.torsion_orders)
            .map(|(&t, &m)| {
                let prod = (t as i128) * (n as i128);
                prod.rem_euclid(m as i128) as u64
            })
            .collect();
        Ok(GroupElement { free, torsion })
    }

    /// Number of elements in the max-norm ball of the given radius.
    pub fn ball_size(&self, radius: u64) -> u128 {
        let side = 2 * radius as u128 + 1;
        let mut n = self.torsion_product();
        for _ in 0..self.free_rank {
            n = n.saturating_mul(side);
        }
        n
    }

    /// Largest radius `<= max_radius` whose ball has at most `max_elements` elements.
    pub fn radius_for_budget(&self, max_radius: u64, max_elements: u128) -> u64 {
        (0..=max_radius)
            .rev()
            .find(|&r| self.ball_size(r) <= max_elements)
            .unwrap_or(0)
    }
}

/// All elements whose free part has max-norm at most `radius`, crossed with
/// every torsion residue, in lexicographic order.
pub fn enumerate_ball(spec: &GroupSpec, radius: u64) -> Result<Vec<GroupElement>> {
    enumerate_ball_with_cap(spec, radius, element_cap())
}

pub fn enumerate_ball_with_cap(spec: &GroupSpec, radius: u64, cap: u64) -> Result<Vec<GroupElement>> {
    let count = spec.ball_size(radius);
    if count > cap as u128 {
        return Err(Error::EnumerationCap { requested: count, cap });
    }
    let r = i64::try_from(radius).map_err(|_| Error::Overflow(format!("radius {radius}")))?;
    let d = spec.free_rank;
    let mut out = Vec::with_capacity(count as usize);
    let mut free = vec![-r; d];
    let mut torsion = vec![0u64; spec.torsion_orders.len()];
    loop {
        out.push(GroupElement { free: free.clone(), torsion: torsion.clone() });
        // odometer, last coordinate fastest
        let mut axis = spec.rank();
        loop {
            if axis == 0 {
                return Ok(out);
            }
            axis -= 1;
            if axis >= d {
                let i = axis - d;
                torsion[i] += 1;
                if torsion[i] < spec.torsion_orders[i] {
                    break;
                }
                torsion[i] = 0;
            } else {
                free[axis] += 1;
                if free[axis] <= r {
                    break;
                }
                free[axis] = -r;
            }
        }
    }
}

impl GroupElement {
    /// Max-norm of the free part.
    pub fn max_norm(&self) -> u64 {
        self.free.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.torsion.iter().all(|&t| t == 0)
    }

    /// Flat coordinate list, free first.
    pub fn coords(&self) -> Vec<i64> {
        self.free
            .iter()
            .copied()
            .chain(self.torsion.iter().map(|&t| t as i64))
            .collect()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            d => parts.push(format!("Z^{d}")),
        }
        parts.extend(self.torsion_orders.iter().map(|m| format!("Z_{m}")));
        f.write_str(&parts.join("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z() -> GroupSpec {
        GroupSpec::integers()
    }

    #[test]
    fn make_group_spec_cases() {
        assert_eq!(make_group_spec(1, &[]).unwrap(), z());
        assert!(make_group_spec(0, &[]).unwrap().is_trivial());
        let g = make_group_spec(2, &[4]).unwrap();
        assert_eq!(g.to_string(), "Z^2xZ_4");
        assert_eq!(make_group_spec(0, &[1]), Err(Error::InvalidTorsionOrder(1)));
        assert_eq!(make_group_spec(0, &[0]), Err(Error::InvalidTorsionOrder(0)));
        assert_eq!(make_group_spec(-1, &[]), Err(Error::NegativeRank(-1)));
    }

    #[test]
    fn element_ops_examples() {
        let g = z();
        let a = g.element(&[3], &[]).unwrap();
        let b = g.element(&[-5], &[]).unwrap();
        assert_eq!(op_elements(&g, &a, &b, ElementAction::Add).unwrap().free, vec![-2]);

        let z4 = GroupSpec::cyclic(4).unwrap();
        let one = z4.generator(0);
        let r = op_elements(&z4, &one, &one, ElementAction::Multiple(4)).unwrap();
        assert!(r.is_identity());

        let g = make_group_spec(1, &[3]).unwrap();
        let x = g.element(&[2], &[1]).unwrap();
        let inv = op_elements(&g, &x, &x, ElementAction::Inverse).unwrap();
        assert_eq!(inv, g.element(&[-2], &[2]).unwrap());
    }

    #[test]
    fn mismatched_spec_is_rejected() {
        let g = z();
        let other = make_group_spec(2, &[]).unwrap().identity();
        assert!(matches!(g.add(&g.identity(), &other), Err(Error::GroupMismatch { .. })));
    }

    #[test]
    fn multiple_overflow_is_an_error() {
        let g = z();
        let x = g.element(&[i64::MAX / 2 + 1], &[]).unwrap();
        assert!(matches!(g.multiple(&x, 2), Err(Error::Overflow(_))));
    }

    #[test]
    fn ball_examples() {
        let b = enumerate_ball(&z(), 1).unwrap();
        let v: Vec<i64> = b.iter().map(|x| x.free[0]).collect();
        assert_eq!(v, vec![-1, 0, 1]);

        let b = enumerate_ball(&GroupSpec::trivial(), 5).unwrap();
        assert_eq!(b, vec![GroupSpec::trivial().identity()]);

        let g = make_group_spec(1, &[2]).unwrap();
        let b = enumerate_ball(&g, 0).unwrap();
        assert_eq!(b, vec![g.element(&[0], &[0]).unwrap(), g.element(&[0], &[1]).unwrap()]);
    }

    #[test]
    fn ball_is_sorted_and_capped() {
        let g = make_group_spec(2, &[3]).unwrap();
        let b = enumerate_ball(&g, 2).unwrap();
        assert_eq!(b.len(), 75);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        let err = enumerate_ball_with_cap(&g, 2, 10).unwrap_err();
        assert_eq!(err, Error::EnumerationCap { requested: 75, cap: 10 });
    }

    fn arb_elem() -> impl Strategy<Value = (i64, i64, u64)> {
        (-1000i64..1000, -1000i64..1000, 0u64..6)
    }

    proptest! {
        #[test]
        fn group_laws(a in arb_elem(), b in arb_elem(), c in arb_elem()) {
            let g = make_group_spec(2, &[6]).unwrap();
            let mk = |(x, y, t): (i64, i64, u64)| g.element(&[x, y], &[t as i64]).unwrap();
            let (a, b, c) = (mk(a), mk(b), mk(c));
            prop_assert_eq!(g.add(&a, &b).unwrap(), g.add(&b, &a).unwrap());
            let ab_c = g.add(&g.add(&a, &b).unwrap(), &c).unwrap();
            let a_bc = g.add(&a, &g.add(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            prop_assert_eq!(g.add(&a, &g.identity()).unwrap(), a.clone());
            prop_assert!(g.add(&a, &g.neg(&a).unwrap()).unwrap().is_identity());
        }

        #[test]
        fn multiple_agrees_with_repeated_add(a in arb_elem(), n in 0i64..=16) {
            let g = make_group_spec(2, &[6]).unwrap();
            let a = g.element(&[a.0, a.1], &[a.2 as i64]).unwrap();
            let mut acc = g.identity();
            for _ in 0..n {
                acc = g.add(&acc, &a).unwrap();
            }
            prop_assert_eq!(g.multiple(&a, n).unwrap(), acc);
        }

        #[test]
        fn balls_are_nested(r in 0u64..4) {
            let g = make_group_spec(1, &[2]).unwrap();
            let small = enumerate_ball(&g, r).unwrap();
            let big: std::collections::BTreeSet<_> = enumerate_ball(&g, r + 1).unwrap().into_iter().collect();
            prop_assert!(small.iter().all(|x| big.contains(x)));
        }
    }
}

//! The weight-lattice side: integral weights in the δ basis, parities, the
//! super Weyl vector ρ, the dominance cones X⁺/X⁺⁺, the weight↔pattern
//! dictionary, and the classical Verma-class engine (translation-functor
//! toggles and level truncation).
//!
//! Coordinates are grouped into blocks: one block of size `n_i` per shape
//! row (parity `c_i`), then a final block of size `r` (parity `ε`).  The
//! bilinear form is the super form `(δ_a, δ_b) = (−1)^{p_a} δ_{ab}`.  The
//! dictionary sends a dominant weight to marker positions `(λ+ρ, δ_k)`:
//! row blocks list their markers directly, and the tail block lists the
//! level-`r` window markers (`ε = 0`) or holes (`ε = 1`), which the stored
//! exception sets encode relative to the two-sided vacuum.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::fock::{self, ClassicalVector, FockVector, Gen, GenOp};
use crate::indexset::{enumerate, Pattern, Shape};
use crate::report::{Family, Report};
use crate::shard;

/// A Grothendieck-group vector in the parabolic Verma basis.  Terms are
/// indexed by the patterns of the basis weights; coefficients are plain
/// integers (the class formulas are ungraded).
pub type VermaVector = ClassicalVector;

/// Number of δ coordinates at level `r`: one per row marker plus `r`.
pub fn dimension(shape: &Shape, r: u32) -> usize {
    shape.row_sizes().iter().map(|&n| n as usize).sum::<usize>() + r as usize
}

/// The coordinate blocks as `(start, length, parity)`, rows first, the
/// level-`r` block last.  `start` is 0-based.
fn blocks(shape: &Shape, r: u32) -> Vec<(usize, usize, u8)> {
    let mut out = Vec::with_capacity(shape.rows() + 1);
    let mut start = 0usize;
    for t in 0..shape.rows() {
        let len = shape.row_sizes()[t] as usize;
        out.push((start, len, shape.charge(t)));
        start += len;
    }
    out.push((start, r as usize, shape.epsilon()));
    out
}

/// Parity of the 1-based coordinate `k`: the charge of the block
/// containing it (`ε` for the final block).
pub fn parity(shape: &Shape, r: u32, k: usize) -> Result<u8> {
    if k == 0 || k > dimension(shape, r) {
        return Err(Error::PositionOutOfRange(format!(
            "coordinate {k} outside 1..={}",
            dimension(shape, r)
        )));
    }
    let idx = k - 1;
    for (start, len, p) in blocks(shape, r) {
        if idx < start + len {
            return Ok(p);
        }
    }
    unreachable!("k was range-checked against the total dimension")
}

/// An integral weight at a finite level, stored as its δ-coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegralWeight {
    shape: Shape,
    level: u32,
    delta: Vec<i64>,
}

impl IntegralWeight {
    pub fn new(shape: Shape, level: u32, delta: Vec<i64>) -> Result<Self> {
        let expected = dimension(&shape, level);
        if delta.len() != expected {
            return Err(Error::WeightLength {
                found: delta.len(),
                expected,
            });
        }
        Ok(IntegralWeight {
            shape,
            level,
            delta,
        })
    }

    pub fn zero(shape: Shape, level: u32) -> Self {
        let delta = vec![0; dimension(&shape, level)];
        IntegralWeight {
            shape,
            level,
            delta,
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn delta(&self) -> &[i64] {
        &self.delta
    }

    /// The super-form pairing `(self, δ_k)` for `k` 1-based.
    pub fn pair_delta(&self, k: usize) -> Result<i64> {
        let p = parity(&self.shape, self.level, k)?;
        let sign = if p == 0 { 1 } else { -1 };
        Ok(sign * self.delta[k - 1])
    }

    pub fn add(&self, other: &IntegralWeight) -> Result<IntegralWeight> {
        if self.shape != other.shape || self.level != other.level {
            return Err(Error::LevelMismatch {
                left: self.level.to_string(),
                right: other.level.to_string(),
            });
        }
        let delta = self
            .delta
            .iter()
            .zip(other.delta.iter())
            .map(|(a, b)| a + b)
            .collect();
        Ok(IntegralWeight {
            shape: self.shape.clone(),
            level: self.level,
            delta,
        })
    }
}

impl std::fmt::Display for IntegralWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.delta.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")@{}", self.level)
    }
}

/// The super Weyl vector ρ at level `r`, normalized so that consecutive
/// same-parity pairings give `(−1)^{p_k}`, mixed pairs give `0`, and the
/// final coordinate pairs to `1−r` (`ε = 0`) or `r` (`ε = 1`).
///
/// Computed via exact integer doubles; the halving is checked, and a
/// residue would be reported as [`Error::NonIntegral`].
pub fn rho(shape: &Shape, r: u32) -> Result<IntegralWeight> {
    let dim = dimension(shape, r);
    let parities: Vec<u8> = (1..=dim)
        .map(|k| parity(shape, r, k))
        .collect::<Result<_>>()?;
    let same = |a: usize, b: usize| -> i64 {
        if parities[a] == parities[b] {
            1
        } else {
            -1
        }
    };
    let mut doubled = vec![0i64; dim];
    for (k, entry) in doubled.iter_mut().enumerate() {
        for j in (k + 1)..dim {
            *entry += same(k, j);
        }
        for i in 0..k {
            *entry -= same(i, k);
        }
    }
    let m: i64 = shape
        .row_sizes()
        .iter()
        .zip(shape.charges())
        .filter(|(_, &c)| c == 1)
        .map(|(&n, _)| i64::from(n))
        .sum();
    let n: i64 = shape
        .row_sizes()
        .iter()
        .zip(shape.charges())
        .filter(|(_, &c)| c == 0)
        .map(|(&n, _)| i64::from(n))
        .sum();
    let eps_sign = if shape.epsilon() == 0 { 1 } else { -1 };
    let norm = n - m + 1 - eps_sign * i64::from(r);
    for (k, d) in doubled.iter_mut().enumerate() {
        let sign = if parities[k] == 0 { 1 } else { -1 };
        *d += norm * sign;
        if d.rem_euclid(2) != 0 {
            return Err(Error::NonIntegral);
        }
        *d /= 2;
    }
    IntegralWeight::new(shape.clone(), r, doubled)
}

/// Whether consecutive ρ-shifted pairings are strictly separated inside
/// every coordinate block (no condition across block boundaries).
pub fn in_x_plus(lam: &IntegralWeight) -> Result<bool> {
    let shape = lam.shape();
    let r = lam.level();
    let shifted = lam.add(&rho(shape, r)?)?;
    for (start, len, p) in blocks(shape, r) {
        let sign = if p == 0 { 1 } else { -1 };
        for k in (start + 1)..(start + len) {
            // 1-based coordinates k and k+1 lie in the same block.
            let gap = shifted.pair_delta(k)? - shifted.pair_delta(k + 1)?;
            if sign * gap <= 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// [`in_x_plus`] plus the tail-block boundary condition
/// `(−1)^ε (λ, δ_dim) ≥ 0`.
pub fn in_x_plusplus(lam: &IntegralWeight) -> Result<bool> {
    if !in_x_plus(lam)? {
        return Ok(false);
    }
    let dim = dimension(lam.shape(), lam.level());
    let eps_sign: i64 = if lam.shape().epsilon() == 0 { 1 } else { -1 };
    Ok(eps_sign * lam.pair_delta(dim)? >= 0)
}

/// The per-block ρ-shifted position sets of a weight.  Distinctness within
/// each block is exactly the [`in_x_plus`] condition.
fn position_sets(lam: &IntegralWeight) -> Result<Vec<BTreeSet<i64>>> {
    let shape = lam.shape();
    let r = lam.level();
    let shifted = lam.add(&rho(shape, r)?)?;
    let mut out = Vec::new();
    for (start, len, _) in blocks(shape, r) {
        let mut set = BTreeSet::new();
        for k in (start + 1)..=(start + len) {
            set.insert(shifted.pair_delta(k)?);
        }
        if set.len() != len {
            return Err(Error::NotDominant(
                "ρ-shifted marker positions collide within a block".into(),
            ));
        }
        out.push(set);
    }
    Ok(out)
}

/// Rebuild the weight whose per-block position sets are given: positions
/// are read off in decreasing order in parity-0 blocks and increasing
/// order in parity-1 blocks, then un-shifted by ρ.
fn weight_from_positions(
    shape: &Shape,
    r: u32,
    positions: &[BTreeSet<i64>],
) -> Result<IntegralWeight> {
    let rho_r = rho(shape, r)?;
    let mut delta = Vec::with_capacity(dimension(shape, r));
    for ((_, len, p), set) in blocks(shape, r).into_iter().zip(positions.iter()) {
        if set.len() != len {
            return Err(Error::Invariant(format!(
                "position block carries {} entries, expected {len}",
                set.len()
            )));
        }
        let sign: i64 = if p == 0 { 1 } else { -1 };
        let ordered: Vec<i64> = if p == 0 {
            set.iter().rev().copied().collect()
        } else {
            set.iter().copied().collect()
        };
        for pos in ordered {
            delta.push(sign * pos);
        }
    }
    // delta currently holds (−1)^{p_k}·pos_k = (λ+ρ)_k; un-shift by ρ.
    let mut lam = IntegralWeight::new(shape.clone(), r, delta)?;
    for (k, d) in lam.delta.iter_mut().enumerate() {
        *d -= rho_r.delta[k];
    }
    Ok(lam)
}

/// Translate the tail-block position set into the stored exception set
/// relative to the two-sided vacuum, and back (the map is an involution).
/// For `ε = 0` positions are window markers; for `ε = 1` they are window
/// holes.  `r` is the window level.
fn tail_positions_to_exceptions(epsilon: u8, r: u32, set: &BTreeSet<i64>) -> BTreeSet<i64> {
    let r = i64::from(r);
    let mut out = BTreeSet::new();
    if epsilon == 0 {
        for j in (1 - r)..=0 {
            if !set.contains(&j) {
                out.insert(j);
            }
        }
        for &j in set.iter().filter(|&&j| j >= 1) {
            out.insert(j);
        }
    } else {
        for &j in set.iter().filter(|&&j| j <= 0) {
            out.insert(j);
        }
        for j in 1..=r {
            if !set.contains(&j) {
                out.insert(j);
            }
        }
    }
    out
}

/// The pattern of a dominant weight: row blocks contribute their marker
/// positions verbatim; the tail block is re-encoded against the vacuum.
pub fn to_pattern(lam: &IntegralWeight) -> Result<Pattern> {
    if !in_x_plus(lam)? {
        return Err(Error::NotDominant(
            "ρ-shifted coordinates are not strictly separated within blocks".into(),
        ));
    }
    if !in_x_plusplus(lam)? {
        return Err(Error::NotDominant(
            "tail block leaves the representable window (boundary condition fails)".into(),
        ));
    }
    let shape = lam.shape();
    let r = lam.level();
    let mut positions = position_sets(lam)?;
    let tail_positions = positions.pop().expect("blocks() always appends the tail");
    let tail = tail_positions_to_exceptions(shape.epsilon(), r, &tail_positions);
    Pattern::from_exceptions(shape, positions, tail)
}

/// The dominant weight of a pattern at window level `r`: inverse of
/// [`to_pattern`].  Defined when the tail exceptions can be encoded by `r`
/// window positions — all holes within the window for `ε = 0`, all
/// particles within it for `ε = 1`; the offending side otherwise names the
/// minimal sufficient level.
pub fn from_pattern(p: &Pattern, r: u32) -> Result<IntegralWeight> {
    let shape = p.shape();
    let ri = i64::from(r);
    for &e in p.tail_exceptions() {
        let out_of_reach = if shape.epsilon() == 0 {
            e < 1 - ri
        } else {
            e > ri
        };
        if out_of_reach {
            let minimum = if e <= 0 { 1 - e } else { e } as u32;
            return Err(Error::LevelTooSmall { level: r, minimum });
        }
    }
    let mut positions: Vec<BTreeSet<i64>> = (0..shape.rows())
        .map(|t| p.row_exceptions(t).clone())
        .collect();
    let tail = tail_positions_to_exceptions(shape.epsilon(), r, p.tail_exceptions());
    positions.push(tail);
    let lam = weight_from_positions(shape, r, &positions)?;
    debug_assert!(
        in_x_plusplus(&lam)?,
        "pattern dictionary image must be dominant"
    );
    Ok(lam)
}

/// The minimal window level displaying every marker of the pattern:
/// the level at which the dictionary, the weight, and the displayed window
/// all exist.  Computed by direct scan from the smallest admissible level.
pub fn r_lambda(p: &Pattern) -> u32 {
    let mut r = 1u32;
    loop {
        let ri = i64::from(r);
        let fits = |&e: &i64| e >= 1 - ri && e <= ri;
        let rows_fit = (0..p.shape().rows()).all(|t| p.row_exceptions(t).iter().all(fits));
        if rows_fit && p.tail_exceptions().iter().all(fits) {
            debug_assert_eq!(r, p.native_level());
            return r;
        }
        r += 1;
    }
}

/// Swap the entries of storage row `t` (the tail is `t = l`) at columns
/// `j` and `j+1`; `None` when the entries agree and the swap is trivial.
pub fn transpose_t(p: &Pattern, t: usize, j: i64) -> Option<Pattern> {
    p.swap_adjacent_columns(t, j)
}

fn class_toggle(j: i64, v: &VermaVector, from: u8) -> Result<VermaVector> {
    let l = v.shape().rows();
    let mut out = VermaVector::zero(v.shape().clone());
    for (p, &c) in v.terms() {
        for t in 0..=l {
            if p.entry(t, j) == from && p.entry(t, j + 1) == 1 - from {
                let swapped = p
                    .swap_adjacent_columns(t, j)
                    .expect("entries differ, so the swap exists");
                out.add_term(swapped, c)?;
            }
        }
    }
    Ok(out)
}

/// The lowering translation class formula: one unit term per row whose
/// entries at `(j, j+1)` read `(1,0)`.  Level-free.
pub fn f_class(j: i64, v: &VermaVector) -> Result<VermaVector> {
    class_toggle(j, v, 1)
}

/// The raising translation class formula: one unit term per row reading
/// `(0,1)` at `(j, j+1)`.  Level-free.
pub fn e_class(j: i64, v: &VermaVector) -> Result<VermaVector> {
    class_toggle(j, v, 0)
}

/// The same translation moves computed purely on the weight side: position
/// `j ↦ j+1` in parity-0 blocks and `j+1 ↦ j` in parity-1 blocks for the
/// lowering direction (reversed for raising), one output weight per
/// applicable block.
pub fn weight_toggle(gen: Gen, j: i64, lam: &IntegralWeight) -> Result<Vec<IntegralWeight>> {
    let shape = lam.shape();
    let r = lam.level();
    let positions = position_sets(lam)?;
    let mut out = Vec::new();
    for (b, (_, _, p)) in blocks(shape, r).into_iter().enumerate() {
        // Lowering moves markers right (parity 0) or holes left (parity 1).
        let move_right = match gen {
            Gen::F => p == 0,
            Gen::E => p == 1,
        };
        let (src, dst) = if move_right { (j, j + 1) } else { (j + 1, j) };
        let set = &positions[b];
        if set.contains(&src) && !set.contains(&dst) {
            let mut moved = positions.clone();
            moved[b].remove(&src);
            moved[b].insert(dst);
            out.push(weight_from_positions(shape, r, &moved)?);
        }
    }
    Ok(out)
}

/// Keep exactly the terms whose pattern is fully displayed at level `r`
/// (equivalently, whose minimal window level is ≤ r).
pub fn truncate_class(v: &VermaVector, r: u32) -> VermaVector {
    v.filter(|p| r_lambda(p) <= r)
}

/// Verify, on every basis pattern at level `r`, that the weight dictionary
/// round-trips and intertwines the weight-side translation moves with the
/// q = 1 specialization of the quantum actions and with the pattern-side
/// class formulas.  Requires `r > |j|` so the toggled columns stay inside
/// the window.
pub fn tpc2_check(shape: &Shape, r: u32, j: i64, workers: usize) -> Result<Report> {
    let f_op: GenOp = &|jj, v, lvl| fock::f_act(jj, v, lvl);
    let e_op: GenOp = &|jj, v, lvl| fock::e_act(jj, v, lvl);
    tpc2_check_with(shape, r, j, workers, f_op, e_op)
}

/// [`tpc2_check`] against caller-supplied quantum operators.
pub fn tpc2_check_with(
    shape: &Shape,
    r: u32,
    j: i64,
    workers: usize,
    f_op: GenOp,
    e_op: GenOp,
) -> Result<Report> {
    if r <= j.unsigned_abs() as u32 {
        return Err(Error::IndexOutsideWindow {
            index: j,
            level: r.to_string(),
        });
    }
    let basis = enumerate(shape, r, None)?;

    let chunk_results = shard::map_chunks(&basis, workers, |chunk| -> Result<[Family; 4]> {
        let mut fam_round = Family::new();
        let mut fam_lower = Family::new();
        let mut fam_raise = Family::new();
        let mut fam_class = Family::new();
        for p in chunk {
            let lam = from_pattern(p, r)?;
            let back = to_pattern(&lam)?;
            fam_round.check(back == *p, || {
                format!("dictionary round-trip fails on {p} (through {lam})")
            });

            for (gen, op, fam) in [
                (Gen::F, f_op, &mut fam_lower),
                (Gen::E, e_op, &mut fam_raise),
            ] {
                let mut weight_side = VermaVector::zero(shape.clone());
                for w in weight_toggle(gen, j, &lam)? {
                    weight_side.add_term(to_pattern(&w)?, 1)?;
                }
                let quantum = fock::specialize_q1(&op(j, &FockVector::basis(p.clone()), r)?);
                fam.check(weight_side == quantum, || {
                    format!("weight-side moves disagree with the q=1 action at j={j} on {p}")
                });
                let class = match gen {
                    Gen::F => f_class(j, &VermaVector::unit(p.clone()))?,
                    Gen::E => e_class(j, &VermaVector::unit(p.clone()))?,
                };
                fam_class.check(class == weight_side, || {
                    format!(
                        "pattern-side class formula disagrees with the weight side at j={j} on {p}"
                    )
                });
            }
        }
        Ok([fam_round, fam_lower, fam_raise, fam_class])
    });

    let mut merged: Option<[Family; 4]> = None;
    for chunk in chunk_results {
        let families = chunk?;
        match merged.as_mut() {
            None => merged = Some(families),
            Some(acc) => {
                for (a, b) in acc.iter_mut().zip(families) {
                    a.merge(b);
                }
            }
        }
    }
    let [fam_round, fam_lower, fam_raise, fam_class] =
        merged.unwrap_or([Family::new(), Family::new(), Family::new(), Family::new()]);

    let mut report = Report::new();
    for (fam, name) in [
        (fam_round, "dictionary-roundtrip"),
        (fam_lower, "lowering-intertwining"),
        (fam_raise, "raising-intertwining"),
        (fam_class, "class-action-agreement"),
    ] {
        let check = fam.into_check(name);
        report.push(check.name, check.pass, check.detail);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexset::kappa;

    fn s0() -> Shape {
        Shape::new(vec![1], vec![0], 0).unwrap()
    }

    fn weight(shape: &Shape, r: u32, delta: &[i64]) -> IntegralWeight {
        IntegralWeight::new(shape.clone(), r, delta.to_vec()).unwrap()
    }

    #[test]
    fn dimension_parity_and_blocks() {
        let shape = s0();
        assert_eq!(dimension(&shape, 1), 2);
        assert_eq!(parity(&shape, 1, 1).unwrap(), 0);
        assert_eq!(parity(&shape, 1, 2).unwrap(), 0);
        assert!(parity(&shape, 1, 3).is_err());
        assert!(parity(&shape, 1, 0).is_err());

        let mixed = Shape::new(vec![1, 1], vec![1, 0], 1).unwrap();
        assert_eq!(dimension(&mixed, 2), 4);
        assert_eq!(parity(&mixed, 2, 1).unwrap(), 1);
        assert_eq!(parity(&mixed, 2, 2).unwrap(), 0);
        assert_eq!(parity(&mixed, 2, 3).unwrap(), 1);
        assert_eq!(parity(&mixed, 2, 4).unwrap(), 1);
    }

    #[test]
    fn rho_hand_values() {
        assert_eq!(rho(&s0(), 1).unwrap().delta(), &[1, 0]);
        let two_row = Shape::new(vec![2], vec![0], 0).unwrap();
        assert_eq!(rho(&two_row, 2).unwrap().delta(), &[2, 1, 0, -1]);
        let dual_tail = Shape::new(vec![1], vec![0], 1).unwrap();
        assert_eq!(rho(&dual_tail, 2).unwrap().delta(), &[1, -1, -2]);
    }

    #[test]
    fn rho_pairing_properties_and_restriction() {
        for shape in [
            s0(),
            Shape::new(vec![1], vec![1], 0).unwrap(),
            Shape::new(vec![1, 1], vec![0, 1], 1).unwrap(),
            Shape::new(vec![2], vec![0], 1).unwrap(),
        ] {
            for r in 1..=4u32 {
                let dim = dimension(&shape, r);
                let rho_r = rho(&shape, r).unwrap();
                for k in 1..dim {
                    let gap = rho_r.pair_delta(k).unwrap() - rho_r.pair_delta(k + 1).unwrap();
                    let pk = parity(&shape, r, k).unwrap();
                    let pk1 = parity(&shape, r, k + 1).unwrap();
                    let expected = if pk == pk1 {
                        if pk == 0 {
                            1
                        } else {
                            -1
                        }
                    } else {
                        0
                    };
                    assert_eq!(gap, expected, "{shape} r={r} k={k}");
                }
                let last = rho_r.pair_delta(dim).unwrap();
                let expected_last = if shape.epsilon() == 0 {
                    1 - i64::from(r)
                } else {
                    i64::from(r)
                };
                assert_eq!(last, expected_last, "{shape} r={r}");
                // Coordinate restriction to the lower level.
                let rho_up = rho(&shape, r + 1).unwrap();
                assert_eq!(&rho_up.delta()[..dim], rho_r.delta(), "{shape} r={r}");
            }
        }
    }

    #[test]
    fn dominance_membership() {
        let shape = s0();
        let zero = IntegralWeight::zero(shape.clone(), 1);
        assert!(in_x_plus(&zero).unwrap());
        assert!(in_x_plusplus(&zero).unwrap());
        // Dominant but over the tail boundary.
        let low = weight(&shape, 1, &[0, -1]);
        assert!(in_x_plus(&low).unwrap());
        assert!(!in_x_plusplus(&low).unwrap());
        // Colliding shifted positions inside a row block.
        let two_row = Shape::new(vec![2], vec![0], 0).unwrap();
        let collide = weight(&two_row, 2, &[0, 1, 0, 0]);
        assert!(!in_x_plus(&collide).unwrap());
        assert!(in_x_plus(&IntegralWeight::zero(two_row, 2)).unwrap());
    }

    #[test]
    fn dictionary_hand_examples() {
        let shape = s0();
        let zero = IntegralWeight::zero(shape.clone(), 1);
        let p = to_pattern(&zero).unwrap();
        assert_eq!(p.window(1).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(from_pattern(&p, 1).unwrap(), zero);

        let k1 = kappa(&shape, 1).unwrap();
        let lam = from_pattern(&k1, 1).unwrap();
        assert_eq!(lam.delta(), &[-1, 0]);
        assert_eq!(to_pattern(&lam).unwrap(), k1);

        let outside = weight(&shape, 1, &[0, -1]);
        assert!(matches!(to_pattern(&outside), Err(Error::NotDominant(_))));
        let collide = weight(&Shape::new(vec![2], vec![0], 0).unwrap(), 2, &[0, 1, 0, 0]);
        assert!(matches!(to_pattern(&collide), Err(Error::NotDominant(_))));
    }

    #[test]
    fn dictionary_round_trips_exhaustively() {
        for shape in [s0(), Shape::new(vec![1, 1], vec![0, 1], 1).unwrap()] {
            for r in shape.min_level()..=2 {
                for p in enumerate(&shape, r, None).unwrap() {
                    let lam = from_pattern(&p, r).unwrap();
                    assert!(in_x_plusplus(&lam).unwrap(), "{p}");
                    assert_eq!(to_pattern(&lam).unwrap(), p, "{p} at r={r}");
                }
            }
        }
    }

    #[test]
    fn dictionary_window_edges() {
        let shape = s0();
        // A tail hole below the level-1 window cannot be encoded there.
        let deep = Pattern::from_exceptions(
            &shape,
            vec![std::iter::once(0).collect()],
            [-1i64, 1].into_iter().collect(),
        )
        .unwrap();
        assert!(matches!(
            from_pattern(&deep, 1),
            Err(Error::LevelTooSmall {
                level: 1,
                minimum: 2
            })
        ));
        let lam = from_pattern(&deep, 2).unwrap();
        assert_eq!(to_pattern(&lam).unwrap(), deep);

        // A high particle is encodable below its native level: the
        // dictionary is defined even though the window display is not.
        let high = Pattern::from_exceptions(
            &shape,
            vec![std::iter::once(0).collect()],
            [0i64, 2].into_iter().collect(),
        )
        .unwrap();
        assert_eq!(high.native_level(), 2);
        let lam = from_pattern(&high, 1).unwrap();
        assert_eq!(lam.delta(), &[-1, 2]);
        assert_eq!(to_pattern(&lam).unwrap(), high);
        assert_eq!(r_lambda(&high), 2);
    }

    #[test]
    fn minimal_window_levels() {
        let shape = s0();
        let zero_pattern = to_pattern(&IntegralWeight::zero(shape.clone(), 1)).unwrap();
        assert_eq!(r_lambda(&zero_pattern), 1);
        let both_at_one = Pattern::from_exceptions(
            &shape,
            vec![std::iter::once(1).collect()],
            [0i64, 1].into_iter().collect(),
        )
        .unwrap();
        assert_eq!(r_lambda(&both_at_one), 1);
        let far = Pattern::from_exceptions(
            &shape,
            vec![std::iter::once(2).collect()],
            std::collections::BTreeSet::new(),
        )
        .unwrap();
        assert_eq!(r_lambda(&far), 2);
    }

    #[test]
    fn transposition_examples() {
        let shape = s0();
        let k1 = kappa(&shape, 1).unwrap();
        let moved = transpose_t(&k1, 1, 0).unwrap();
        assert_eq!(moved.window(1).unwrap(), vec![vec![1, 0], vec![0, 1]]);
        // Involution.
        assert_eq!(transpose_t(&moved, 1, 0).unwrap(), k1);
        // Equal entries give nothing.
        assert!(transpose_t(&k1, 0, 1).is_none());
    }

    #[test]
    fn class_action_examples() {
        let shape = s0();
        let zero_pattern = to_pattern(&IntegralWeight::zero(shape.clone(), 1)).unwrap();
        let out = f_class(0, &VermaVector::unit(zero_pattern)).unwrap();
        assert_eq!(out.term_count(), 1);
        let delta2 = weight(&shape, 1, &[0, 1]);
        let (p, &c) = out.terms().next().unwrap();
        assert_eq!(c, 1);
        assert_eq!(from_pattern(p, 1).unwrap(), delta2);

        let k1 = kappa(&shape, 1).unwrap();
        assert!(e_class(0, &VermaVector::unit(k1.clone()))
            .unwrap()
            .is_zero());
        let lowered = f_class(0, &VermaVector::unit(k1)).unwrap();
        assert_eq!(lowered.term_count(), 2);
        for (_, &c) in lowered.terms() {
            assert_eq!(c, 1);
        }
    }

    #[test]
    fn class_actions_shift_block_keys() {
        let shape = s0();
        for p in enumerate(&shape, 2, None).unwrap() {
            let key = p.block_key();
            for j in [-1i64, 0, 1] {
                let out = f_class(j, &VermaVector::unit(p.clone())).unwrap();
                for (q, _) in out.terms() {
                    let shifted = q.block_key();
                    let mut expect = key.weight().clone();
                    *expect.entry(j).or_insert(0) -= 1;
                    *expect.entry(j + 1).or_insert(0) += 1;
                    expect.retain(|_, v| *v != 0);
                    assert_eq!(shifted.weight(), &expect, "j={j} on {p}");
                }
            }
        }
    }

    #[test]
    fn truncation_keeps_and_kills() {
        let shape = s0();
        let k1 = kappa(&shape, 1).unwrap();
        let k2 = kappa(&shape, 2).unwrap();
        let mut v = VermaVector::unit(k1.clone());
        v.add_term(k2.clone(), 3).unwrap();
        let cut = truncate_class(&v, 1);
        assert_eq!(cut.coeff(&k1), 1);
        assert_eq!(cut.coeff(&k2), 0);
        assert_eq!(truncate_class(&v, 2), v);
    }

    #[test]
    fn tpc2_small_windows_pass() {
        let shape = s0();
        let report = tpc2_check(&shape, 1, 0, 1).unwrap();
        assert!(report.pass(), "{}", report.summary());
        for j in [-1i64, 0, 1] {
            let report = tpc2_check(&shape, 2, j, 2).unwrap();
            assert!(report.pass(), "j={j}: {}", report.summary());
        }
    }

    #[test]
    fn tpc2_rejects_wide_indices() {
        let shape = s0();
        assert!(matches!(
            tpc2_check(&shape, 1, 1, 1),
            Err(Error::IndexOutsideWindow { .. })
        ));
    }

    #[test]
    fn tpc2_detects_broken_operators() {
        let shape = s0();
        // Swap the roles of raising and lowering.
        let f_op: GenOp = &|jj, v, lvl| fock::e_act(jj, v, lvl);
        let e_op: GenOp = &|jj, v, lvl| fock::f_act(jj, v, lvl);
        let report = tpc2_check_with(&shape, 1, 0, 1, f_op, e_op).unwrap();
        assert!(!report.pass());
        let failing = report.first_failure().unwrap();
        assert!(failing.detail.is_some());
    }
}

//! Weight and root lattices over integer index windows.
//!
//! For a finite level `r >= 1` the root index window is `I_r = {1-r, ..., r-1}`
//! and the weight index window is `I_r^+ = {1-r, ..., r}`.  The weight lattice
//! at level `r` is spanned by unit weights `eps_i` for `i` in `I_r^+`, subject
//! to the single relation that the sum of all `eps_i` over the window is zero.
//! At the infinite level there is no relation and the windows are all of `Z`.
//!
//! Weights are stored as raw integer coordinate vectors in the `eps` basis;
//! equality at a finite level holds when the two coordinate vectors differ by
//! a constant across the whole window (the all-ones relation).  Simple roots
//! are `alpha_i = eps_i - eps_{i+1}` for `i` in the root window.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Evaluation level: a finite window half-width, or the infinite limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Finite(u32),
    Infinite,
}

impl Level {
    /// The underlying finite value, if any.
    pub fn finite(self) -> Option<u32> {
        match self {
            Level::Finite(r) => Some(r),
            Level::Infinite => None,
        }
    }

    /// Does the weight index window `I_r^+` contain `i`?
    pub fn weight_window_contains(self, i: i64) -> bool {
        match self {
            Level::Finite(r) => {
                let r = i64::from(r);
                1 - r <= i && i <= r
            }
            Level::Infinite => true,
        }
    }

    /// Does the root index window `I_r` contain `i`?
    pub fn root_window_contains(self, i: i64) -> bool {
        match self {
            Level::Finite(r) => {
                let r = i64::from(r);
                1 - r <= i && i < r
            }
            Level::Infinite => true,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(r) => write!(f, "{r}"),
            Level::Infinite => write!(f, "inf"),
        }
    }
}

/// An element of the weight lattice at a fixed level, stored as raw
/// coordinates in the `eps` basis (zero coordinates are not stored).
///
/// At a finite level the support must lie inside the weight window, and
/// equality is taken modulo the all-ones vector on the window.  At the
/// infinite level equality is exact.  There is deliberately no `Hash`
/// implementation: hashing raw coordinates would break the quotient.
#[derive(Debug, Clone)]
pub struct EpsWeight {
    level: Level,
    coords: BTreeMap<i64, i64>,
}

impl EpsWeight {
    /// The zero weight at the given level.
    pub fn zero(level: Level) -> Self {
        EpsWeight {
            level,
            coords: BTreeMap::new(),
        }
    }

    /// Build a weight from raw coordinates, validating window support.
    pub fn from_coords<I>(level: Level, coords: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, i64)>,
    {
        let mut w = EpsWeight::zero(level);
        for (i, c) in coords {
            if !level.weight_window_contains(i) {
                return Err(Error::IndexOutsideWindow {
                    index: i,
                    level: level.to_string(),
                });
            }
            w.add_coord(i, c);
        }
        Ok(w)
    }

    pub fn level(&self) -> Level {
        self.level
    }

    /// The raw coordinate of `eps_i`.
    pub fn coord(&self, i: i64) -> i64 {
        self.coords.get(&i).copied().unwrap_or(0)
    }

    /// Raw nonzero coordinates in increasing index order.
    pub fn coords(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coords.iter().map(|(&i, &c)| (i, c))
    }

    fn add_coord(&mut self, i: i64, c: i64) {
        let entry = self.coords.entry(i).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coords.remove(&i);
        }
    }

    /// Add a multiple of a unit weight in place.  The index must lie in the
    /// weight window; callers that iterate over window positions uphold this.
    pub fn add_eps(&mut self, i: i64, c: i64) -> Result<()> {
        if !self.level.weight_window_contains(i) {
            return Err(Error::IndexOutsideWindow {
                index: i,
                level: self.level.to_string(),
            });
        }
        self.add_coord(i, c);
        Ok(())
    }

    fn require_same_level(&self, other: &EpsWeight) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch {
                left: self.level.to_string(),
                right: other.level.to_string(),
            });
        }
        Ok(())
    }

    /// Coordinate-wise sum; the levels must agree.
    pub fn add(&self, other: &EpsWeight) -> Result<EpsWeight> {
        self.require_same_level(other)?;
        let mut out = self.clone();
        for (i, c) in other.coords() {
            out.add_coord(i, c);
        }
        Ok(out)
    }

    /// Coordinate-wise difference; the levels must agree.
    pub fn sub(&self, other: &EpsWeight) -> Result<EpsWeight> {
        self.require_same_level(other)?;
        let mut out = self.clone();
        for (i, c) in other.coords() {
            out.add_coord(i, -c);
        }
        Ok(out)
    }

    /// Scale every coordinate by an integer.
    pub fn scale(&self, k: i64) -> EpsWeight {
        let mut out = EpsWeight::zero(self.level);
        for (i, c) in self.coords() {
            out.add_coord(i, c * k);
        }
        out
    }

    /// Pair with the `i`-th simple coroot: the difference of the `eps_i` and
    /// `eps_{i+1}` coordinates.  `i` must lie in the root window.  The value
    /// is invariant under adding a constant to all window coordinates, so it
    /// is well defined on the finite-level quotient.
    pub fn pair_with_coroot(&self, i: i64) -> Result<i64> {
        if !self.level.root_window_contains(i) {
            return Err(Error::IndexOutsideWindow {
                index: i,
                level: self.level.to_string(),
            });
        }
        Ok(self.coord(i) - self.coord(i + 1))
    }

    /// Express this weight as a non-negative-free integer combination of
    /// simple roots, if it lies in the root lattice.
    ///
    /// At the infinite level the expansion exists exactly when the coordinate
    /// sum vanishes, and the coefficients are prefix sums of the coordinates.
    /// At a finite level the representative is first normalised by adding the
    /// unique constant that makes the window sum zero (possible exactly when
    /// the window sum is divisible by the window size `2r`); the prefix sums
    /// of the normalised coordinates are then the unique coefficients.
    pub fn positive_cone_decompose(&self) -> Option<RootCoeffs> {
        let mut coeffs = BTreeMap::new();
        match self.level {
            Level::Infinite => {
                let total: i64 = self.coords.values().sum();
                if total != 0 {
                    return None;
                }
                if let (Some((&lo, _)), Some((&hi, _))) =
                    (self.coords.iter().next(), self.coords.iter().next_back())
                {
                    let mut acc = 0i64;
                    for j in lo..hi {
                        acc += self.coord(j);
                        if acc != 0 {
                            coeffs.insert(j, acc);
                        }
                    }
                }
            }
            Level::Finite(r) => {
                let r = i64::from(r);
                if r == 0 {
                    return if self.coords.is_empty() {
                        Some(RootCoeffs {
                            level: self.level,
                            coeffs,
                        })
                    } else {
                        None
                    };
                }
                let total: i64 = self.coords.values().sum();
                if total.rem_euclid(2 * r) != 0 {
                    return None;
                }
                let t = -total / (2 * r);
                let mut acc = 0i64;
                for j in (1 - r)..r {
                    acc += self.coord(j) + t;
                    if acc != 0 {
                        coeffs.insert(j, acc);
                    }
                }
            }
        }
        Some(RootCoeffs {
            level: self.level,
            coeffs,
        })
    }
}

impl PartialEq for EpsWeight {
    fn eq(&self, other: &Self) -> bool {
        if self.level != other.level {
            return false;
        }
        match self.level {
            Level::Infinite => self.coords == other.coords,
            Level::Finite(r) => {
                let r = i64::from(r);
                let t = self.coord(1 - r) - other.coord(1 - r);
                ((1 - r)..=r).all(|j| self.coord(j) - other.coord(j) == t)
            }
        }
    }
}

impl Eq for EpsWeight {}

/// Integer coefficients of an element of the root lattice with respect to
/// the simple roots.  The expansion produced by
/// [`EpsWeight::positive_cone_decompose`] is unique, so exact equality is
/// meaningful here (unlike for raw weight coordinates).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootCoeffs {
    level: Level,
    coeffs: BTreeMap<i64, i64>,
}

impl RootCoeffs {
    pub fn level(&self) -> Level {
        self.level
    }

    /// The coefficient of `alpha_i`.
    pub fn coeff(&self, i: i64) -> i64 {
        self.coeffs.get(&i).copied().unwrap_or(0)
    }

    /// Nonzero coefficients in increasing index order.
    pub fn coeffs(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&i, &c)| (i, c))
    }

    /// Are all coefficients non-negative?
    pub fn all_nonneg(&self) -> bool {
        self.coeffs.values().all(|&c| c >= 0)
    }

    /// The sum of all coefficients.
    pub fn coefficient_sum(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// Expand back into the weight lattice as a sum of simple roots.
    pub fn expand(&self) -> EpsWeight {
        let mut w = EpsWeight::zero(self.level);
        for (i, c) in self.coeffs() {
            w.add_coord(i, c);
            w.add_coord(i + 1, -c);
        }
        w
    }

    /// The squared length of the corresponding root-lattice element under the
    /// standard symmetric form (`alpha_i . alpha_i = 2`, adjacent product
    /// `-1`, distant product `0`).
    pub fn norm_sq(&self) -> i64 {
        let mut total = 0i64;
        for (i, c) in self.coeffs() {
            total += c * (2 * c - self.coeff(i - 1) - self.coeff(i + 1));
        }
        total
    }
}

/// The unit weight `eps_i` at the given level.
pub fn eps(i: i64, level: Level) -> Result<EpsWeight> {
    EpsWeight::from_coords(level, [(i, 1)])
}

/// The simple root `alpha_i = eps_i - eps_{i+1}`; `i` must lie in the root
/// window of the level.
pub fn simple_root(i: i64, level: Level) -> Result<EpsWeight> {
    if !level.root_window_contains(i) {
        return Err(Error::IndexOutsideWindow {
            index: i,
            level: level.to_string(),
        });
    }
    EpsWeight::from_coords(level, [(i, 1), (i + 1, -1)])
}

/// Is `gamma - beta` a non-negative integer combination of simple roots?
/// This is the dominance order used throughout; the levels must agree.
pub fn dominance_leq(beta: &EpsWeight, gamma: &EpsWeight) -> Result<bool> {
    if beta.level() != gamma.level() {
        return Err(Error::LevelMismatch {
            left: beta.level().to_string(),
            right: gamma.level().to_string(),
        });
    }
    let diff = gamma.sub(beta)?;
    Ok(match diff.positive_cone_decompose() {
        Some(c) => c.all_nonneg(),
        None => false,
    })
}

/// The difference of squared lengths `kappa.kappa - lambda.lambda` under the
/// symmetric form with orthonormal `eps` basis, computed exactly.
///
/// Writing `lambda = kappa - beta` with `beta` in the root lattice (otherwise
/// the difference is not defined and `NotInRootLattice` is returned), the
/// value equals `2 (kappa, beta) - (beta, beta)`.  Both terms are invariant
/// under adding a constant to all window coordinates, so the result is well
/// defined at finite levels.
pub fn q_norm_difference(kappa: &EpsWeight, lambda: &EpsWeight) -> Result<i64> {
    if kappa.level() != lambda.level() {
        return Err(Error::LevelMismatch {
            left: kappa.level().to_string(),
            right: lambda.level().to_string(),
        });
    }
    let diff = kappa.sub(lambda)?;
    let beta = diff
        .positive_cone_decompose()
        .ok_or(Error::NotInRootLattice)?;
    let mut pairing = 0i64;
    for (i, c) in beta.coeffs() {
        pairing += c * kappa.pair_with_coroot(i)?;
    }
    Ok(2 * pairing - beta.norm_sq())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(level: Level, coords: &[(i64, i64)]) -> EpsWeight {
        EpsWeight::from_coords(level, coords.iter().copied()).unwrap()
    }

    #[test]
    fn unit_weights_respect_windows() {
        assert_eq!(eps(0, Level::Finite(1)).unwrap().coord(0), 1);
        assert_eq!(eps(1, Level::Finite(1)).unwrap().coord(1), 1);
        assert!(matches!(
            eps(2, Level::Finite(1)),
            Err(Error::IndexOutsideWindow { index: 2, .. })
        ));
        assert!(eps(-100, Level::Infinite).is_ok());
    }

    #[test]
    fn simple_roots_respect_root_window() {
        let a = simple_root(0, Level::Finite(1)).unwrap();
        assert_eq!(a.coord(0), 1);
        assert_eq!(a.coord(1), -1);
        assert!(simple_root(1, Level::Finite(1)).is_err());
        assert!(simple_root(-1, Level::Finite(2)).is_ok());
    }

    #[test]
    fn finite_level_equality_is_modulo_all_ones() {
        let lvl = Level::Finite(2);
        let a = w(lvl, &[(-1, 1), (0, 1), (1, 1), (2, 1)]);
        let b = EpsWeight::zero(lvl);
        assert_eq!(a, b);
        let c = w(lvl, &[(0, 1)]);
        assert_ne!(a, c);
        // Shift by a non-constant vector is not the identity.
        let d = w(lvl, &[(-1, 1), (0, 2), (1, 1), (2, 1)]);
        assert_ne!(d, b);
        // At the infinite level the all-ones shift is not available.
        let e = w(Level::Infinite, &[(0, 1)]);
        let f = EpsWeight::zero(Level::Infinite);
        assert_ne!(e, f);
        // Cross-level comparison is always unequal.
        assert_ne!(w(Level::Finite(1), &[]), w(Level::Finite(2), &[]));
    }

    #[test]
    fn decompose_simple_cases() {
        // alpha_0 itself.
        let a = simple_root(0, Level::Infinite).unwrap();
        let c = a.positive_cone_decompose().unwrap();
        assert_eq!(c.coeff(0), 1);
        assert_eq!(c.coeffs().count(), 1);

        // eps_0 - eps_2 = alpha_0 + alpha_1.
        let d = w(Level::Infinite, &[(0, 1), (2, -1)]);
        let c = d.positive_cone_decompose().unwrap();
        assert_eq!((c.coeff(0), c.coeff(1)), (1, 1));

        // A single eps is not in the root lattice at the infinite level.
        assert!(w(Level::Infinite, &[(0, 1)])
            .positive_cone_decompose()
            .is_none());

        // At level 1 the window sum of eps_0 is 1, not divisible by 2.
        assert!(w(Level::Finite(1), &[(0, 1)])
            .positive_cone_decompose()
            .is_none());

        // At level 1, eps_0 + eps_1 is the all-ones vector: the zero class.
        let z = w(Level::Finite(1), &[(0, 1), (1, 1)]);
        let c = z.positive_cone_decompose().unwrap();
        assert_eq!(c.coefficient_sum(), 0);

        // At level 1, 2 eps_0 = eps_0 - eps_1 modulo all-ones: alpha_0.
        let two = w(Level::Finite(1), &[(0, 2)]);
        let c = two.positive_cone_decompose().unwrap();
        assert_eq!(c.coeff(0), 1);
        assert_eq!(c.coeffs().count(), 1);
    }

    #[test]
    fn dominance_examples() {
        let lvl = Level::Infinite;
        let hi = w(lvl, &[(0, 2)]);
        let lo = hi.sub(&simple_root(0, lvl).unwrap()).unwrap();
        assert!(dominance_leq(&lo, &hi).unwrap());
        assert!(!dominance_leq(&hi, &lo).unwrap());
        assert!(dominance_leq(&hi, &hi).unwrap());
        // Incomparable: differ by eps_0 - eps_1 - (eps_2 - eps_3) which
        // decomposes with mixed signs.
        let a = w(lvl, &[(0, 1), (1, -1)]);
        let b = w(lvl, &[(2, 1), (3, -1)]);
        assert!(!dominance_leq(&a, &b).unwrap());
        assert!(!dominance_leq(&b, &a).unwrap());
        // Level mismatch is an error.
        assert!(dominance_leq(&w(Level::Finite(1), &[]), &w(Level::Finite(2), &[])).is_err());
    }

    #[test]
    fn coroot_pairing_gives_cartan_matrix() {
        let lvl = Level::Finite(3);
        for i in -2..3i64 {
            for j in -2..3i64 {
                let aj = simple_root(j, lvl).unwrap();
                let expected = if i == j {
                    2
                } else if (i - j).abs() == 1 {
                    -1
                } else {
                    0
                };
                assert_eq!(aj.pair_with_coroot(i).unwrap(), expected, "(i,j)=({i},{j})");
            }
        }
        // Out-of-window coroot index.
        assert!(w(lvl, &[]).pair_with_coroot(3).is_err());
    }

    #[test]
    fn q_norm_difference_examples() {
        // kappa = 2 eps_0; subtracting one alpha_0 gives 2*1*2 - 2 = 2.
        for lvl in [Level::Infinite, Level::Finite(1), Level::Finite(4)] {
            let kappa = w(lvl, &[(0, 2)]);
            let one = kappa.sub(&simple_root(0, lvl).unwrap()).unwrap();
            assert_eq!(q_norm_difference(&kappa, &one).unwrap(), 2, "{lvl}");
            let two = kappa.sub(&simple_root(0, lvl).unwrap().scale(2)).unwrap();
            assert_eq!(q_norm_difference(&kappa, &two).unwrap(), 0, "{lvl}");
        }
        // Not in the root lattice.
        let kappa = w(Level::Infinite, &[(0, 2)]);
        let off = w(Level::Infinite, &[(0, 1)]);
        assert!(matches!(
            q_norm_difference(&kappa, &off),
            Err(Error::NotInRootLattice)
        ));
    }

    #[test]
    fn q_norm_matches_direct_squared_lengths_at_infinite_level() {
        // At the infinite level both squared lengths are directly computable.
        let cases = [
            vec![(0i64, 2i64)],
            vec![(-1, 1), (0, 1), (2, 1)],
            vec![(-2, 3), (1, -1)],
        ];
        let deltas = [
            vec![(0i64, 1i64)],
            vec![(-1, 2), (1, 1)],
            vec![(0, -1), (-2, 1)],
        ];
        for coords in &cases {
            let kappa = w(Level::Infinite, coords);
            for d in &deltas {
                let mut beta = EpsWeight::zero(Level::Infinite);
                for &(i, c) in d {
                    let a = simple_root(i, Level::Infinite).unwrap().scale(c);
                    beta = beta.add(&a).unwrap();
                }
                let lambda = kappa.sub(&beta).unwrap();
                let sq = |x: &EpsWeight| -> i64 { x.coords().map(|(_, c)| c * c).sum() };
                assert_eq!(
                    q_norm_difference(&kappa, &lambda).unwrap(),
                    sq(&kappa) - sq(&lambda)
                );
            }
        }
    }

    fn arb_root_coeffs(level: Level, lo: i64, hi: i64) -> impl Strategy<Value = RootCoeffs> {
        let span = (hi - lo) as usize;
        proptest::collection::vec(-3i64..=3, span).prop_map(move |vals| {
            let mut coeffs = BTreeMap::new();
            for (k, v) in vals.into_iter().enumerate() {
                if v != 0 {
                    coeffs.insert(lo + k as i64, v);
                }
            }
            RootCoeffs { level, coeffs }
        })
    }

    proptest! {
        #[test]
        fn decompose_round_trips_infinite(c in arb_root_coeffs(Level::Infinite, -4, 4)) {
            let expanded = c.expand();
            let back = expanded.positive_cone_decompose().unwrap();
            prop_assert_eq!(back, c);
        }

        #[test]
        fn decompose_round_trips_finite(c in arb_root_coeffs(Level::Finite(4), -3, 3)) {
            let expanded = c.expand();
            let back = expanded.positive_cone_decompose().unwrap();
            prop_assert_eq!(back, c);
        }

        #[test]
        fn finite_decompose_ignores_all_ones_shift(
            c in arb_root_coeffs(Level::Finite(3), -2, 2),
            shift in -3i64..=3,
        ) {
            let mut expanded = c.expand();
            for j in -2i64..=3 {
                expanded.add_eps(j, shift).unwrap();
            }
            let back = expanded.positive_cone_decompose().unwrap();
            prop_assert_eq!(back, c);
        }

        #[test]
        fn q_norm_is_additive_along_chains(
            c1 in arb_root_coeffs(Level::Finite(3), -2, 2),
            c2 in arb_root_coeffs(Level::Finite(3), -2, 2),
            kappa_coords in proptest::collection::vec(-2i64..=2, 6),
        ) {
            let lvl = Level::Finite(3);
            let mut kappa = EpsWeight::zero(lvl);
            for (k, v) in kappa_coords.into_iter().enumerate() {
                kappa.add_eps(-2 + k as i64, v).unwrap();
            }
            let mid = kappa.sub(&c1.expand()).unwrap();
            let far = mid.sub(&c2.expand()).unwrap();
            let a = q_norm_difference(&kappa, &mid).unwrap();
            let b = q_norm_difference(&mid, &far).unwrap();
            let total = q_norm_difference(&kappa, &far).unwrap();
            prop_assert_eq!(a + b, total);
        }

        #[test]
        fn dominance_is_a_partial_order_sample(
            c1 in arb_root_coeffs(Level::Infinite, -3, 3),
            c2 in arb_root_coeffs(Level::Infinite, -3, 3),
        ) {
            let zero = EpsWeight::zero(Level::Infinite);
            let a = zero.sub(&c1.expand()).unwrap();
            let b = zero.sub(&c2.expand()).unwrap();
            // Reflexivity.
            prop_assert!(dominance_leq(&a, &a).unwrap());
            // Antisymmetry.
            if dominance_leq(&a, &b).unwrap() && dominance_leq(&b, &a).unwrap() {
                prop_assert_eq!(&a, &b);
            }
            // Transitivity through the zero weight where applicable.
            if dominance_leq(&a, &zero).unwrap() && dominance_leq(&zero, &b).unwrap() {
                prop_assert!(dominance_leq(&a, &b).unwrap());
            }
        }
    }
}

//! The identification between the two tail conventions: a pattern's
//! exception data is read unchanged over the shape with the opposite ε.
//! Both conventions share the tail background (markers far left, gaps far
//! right), so the map is the identity on the underlying limit 01-matrix;
//! what changes is only the window bookkeeping.  Verification checks that
//! this identity is a bijection of finite windows, a poset isomorphism,
//! and an intertwiner of the classical (q = 1) actions.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::fock::{self, ClassicalVector, FockVector};
use crate::indexset::{enumerate, poset_leq, Pattern, Shape};
use crate::report::{Family, Report};
use crate::shard;

/// The paired shapes differing only in ε.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityContext {
    shape0: Shape,
    shape1: Shape,
}

impl DualityContext {
    /// Build the context from either of the two shapes.
    pub fn new(shape: &Shape) -> Result<Self> {
        Ok(DualityContext {
            shape0: shape.with_epsilon(0)?,
            shape1: shape.with_epsilon(1)?,
        })
    }

    pub fn shape0(&self) -> &Shape {
        &self.shape0
    }

    pub fn shape1(&self) -> &Shape {
        &self.shape1
    }

    /// The partner of one of the two shapes.
    pub fn other(&self, shape: &Shape) -> Result<&Shape> {
        if *shape == self.shape0 {
            Ok(&self.shape1)
        } else if *shape == self.shape1 {
            Ok(&self.shape0)
        } else {
            Err(Error::ShapeMismatch)
        }
    }
}

/// Re-read a pattern's exception data over the partner shape.  The
/// underlying limit matrix is unchanged; the native level is recomputed
/// from scratch by the pattern constructor.
pub fn transport(ctx: &DualityContext, p: &Pattern) -> Result<Pattern> {
    let target = ctx.other(p.shape())?;
    let rows: Vec<BTreeSet<i64>> = (0..p.shape().rows())
        .map(|t| p.row_exceptions(t).clone())
        .collect();
    Pattern::from_exceptions(target, rows, p.tail_exceptions().clone())
}

/// Transport every term of an integer-coefficient vector.
pub fn transport_vector(ctx: &DualityContext, v: &ClassicalVector) -> Result<ClassicalVector> {
    let target = ctx.other(v.shape())?;
    v.map_patterns(target, |p| transport(ctx, p))
}

/// Signature of the pattern map under test, so that verification can also
/// run against deliberately broken transports in tests.
pub type TransportOp<'a> = &'a (dyn Fn(&Pattern) -> Result<Pattern> + Sync);

/// Verify the duality on every pattern displayable at level `depth`:
/// the map is a bijection between the two finite windows and an involution,
/// it preserves the partial order pairwise, and it intertwines the q = 1
/// raising and lowering actions for every `j` in `js`.
pub fn verify_superduality(
    ctx: &DualityContext,
    depth: u32,
    js: &[i64],
    workers: usize,
) -> Result<Report> {
    let op: TransportOp = &|p| transport(ctx, p);
    verify_superduality_with(ctx, depth, js, workers, op)
}

/// [`verify_superduality`] against a caller-supplied pattern map.
pub fn verify_superduality_with(
    ctx: &DualityContext,
    depth: u32,
    js: &[i64],
    workers: usize,
    op: TransportOp,
) -> Result<Report> {
    if depth == 0 {
        return Err(Error::LevelTooSmall {
            level: 0,
            minimum: 1,
        });
    }
    let sample0 = enumerate(ctx.shape0(), depth, None)?;
    let sample1 = enumerate(ctx.shape1(), depth, None)?;

    // Bijection and involution, collecting the images in sample order.
    let chunk_results = shard::map_chunks(
        &sample0,
        workers,
        |chunk| -> Result<(Family, Vec<Pattern>)> {
            let mut fam = Family::new();
            let mut images = Vec::with_capacity(chunk.len());
            for p in chunk {
                let image = op(p)?;
                let back = op(&image)?;
                fam.check(back == *p, || format!("transport fails to invert on {p}"));
                images.push(image);
            }
            Ok((fam, images))
        },
    );
    let mut fam_bij = Family::new();
    let mut images: Vec<Pattern> = Vec::with_capacity(sample0.len());
    for chunk in chunk_results {
        let (fam, mut part) = chunk?;
        fam_bij.merge(fam);
        images.append(&mut part);
    }
    let image_set: BTreeSet<&Pattern> = images.iter().collect();
    let target_set: BTreeSet<&Pattern> = sample1.iter().collect();
    fam_bij.check(image_set.len() == images.len(), || {
        "transport is not injective on the sample".to_string()
    });
    fam_bij.check(image_set == target_set, || {
        format!(
            "transport image has {} patterns, partner window has {}",
            image_set.len(),
            target_set.len()
        )
    });

    // Pairwise order agreement, sharded by the left element.
    let indices: Vec<usize> = (0..sample0.len()).collect();
    let poset_chunks = shard::map_chunks(&indices, workers, |chunk| -> Result<Family> {
        let mut fam = Family::new();
        for &a in chunk {
            for b in 0..sample0.len() {
                let before = poset_leq(&sample0[a], &sample0[b], depth)?;
                let after = poset_leq(&images[a], &images[b], depth)?;
                fam.check(before == after, || {
                    format!(
                        "order disagrees: {} vs {} (before={before}, after={after})",
                        sample0[a], sample0[b]
                    )
                });
            }
        }
        Ok(fam)
    });
    let mut fam_poset = Family::new();
    for chunk in poset_chunks {
        fam_poset.merge(chunk?);
    }

    // Classical intertwining for every generator index in the window.
    let act_chunks = shard::map_chunks(&sample0, workers, |chunk| -> Result<Family> {
        let mut fam = Family::new();
        for p in chunk {
            let image = op(p)?;
            for &j in js {
                let level = depth.max(j.unsigned_abs() as u32 + 1);
                for lower in [true, false] {
                    let act = |pat: &Pattern| -> Result<ClassicalVector> {
                        let v = FockVector::basis(pat.clone());
                        let out = if lower {
                            fock::f_act(j, &v, level)?
                        } else {
                            fock::e_act(j, &v, level)?
                        };
                        Ok(fock::specialize_q1(&out))
                    };
                    let moved_then_transport = act(p)?.map_patterns(image.shape(), |q| op(q))?;
                    let transport_then_moved = act(&image)?;
                    fam.check(moved_then_transport == transport_then_moved, || {
                        let name = if lower { "f" } else { "e" };
                        format!("{name}_{j} does not commute with transport on {p}")
                    });
                }
            }
        }
        Ok(fam)
    });
    let mut fam_act = Family::new();
    for chunk in act_chunks {
        fam_act.merge(chunk?);
    }

    let mut report = Report::new();
    for (fam, name) in [
        (fam_bij, "transport-bijection"),
        (fam_poset, "poset-agreement"),
        (fam_act, "classical-intertwining"),
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

    fn ctx() -> DualityContext {
        DualityContext::new(&Shape::new(vec![1], vec![0], 0).unwrap()).unwrap()
    }

    #[test]
    fn transport_is_identity_on_data() {
        let ctx = ctx();
        let k1 = kappa(ctx.shape0(), 1).unwrap();
        let t = transport(&ctx, &k1).unwrap();
        assert_eq!(t.shape().epsilon(), 1);
        assert_eq!(t.row_exceptions(0), k1.row_exceptions(0));
        assert_eq!(t.tail_exceptions(), k1.tail_exceptions());
        assert_eq!(t.native_level(), k1.native_level());
        assert_eq!(transport(&ctx, &t).unwrap(), k1);
    }

    #[test]
    fn transport_rejects_foreign_shapes() {
        let ctx = ctx();
        let wide = Shape::new(vec![2], vec![0], 0).unwrap();
        let p = kappa(&wide, 2).unwrap();
        assert!(matches!(transport(&ctx, &p), Err(Error::ShapeMismatch)));
    }

    #[test]
    fn verification_passes_on_the_level_two_window() {
        let ctx = ctx();
        assert_eq!(enumerate(ctx.shape0(), 2, None).unwrap().len(), 24);
        let report = verify_superduality(&ctx, 2, &[-1, 0, 1], 2).unwrap();
        assert!(report.pass(), "{}", report.summary());
        let names: Vec<&str> = report.checks().iter().map(|c| c.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "transport-bijection",
                "poset-agreement",
                "classical-intertwining"
            ]
        );
    }

    #[test]
    fn verification_rejects_zero_depth() {
        let ctx = ctx();
        assert!(matches!(
            verify_superduality(&ctx, 0, &[0], 1),
            Err(Error::LevelTooSmall { .. })
        ));
    }

    #[test]
    fn shifted_tail_cut_breaks_intertwining() {
        let ctx = ctx();
        let shifted: TransportOp = &|p| {
            let honest = transport(&ctx, p)?;
            // Move the tail's vacuum boundary by one column where possible.
            Ok(honest
                .swap_adjacent_columns(honest.shape().rows(), 0)
                .unwrap_or(honest))
        };
        let report = verify_superduality_with(&ctx, 2, &[0], 1, shifted).unwrap();
        assert!(!report.pass());
        let act = report
            .checks()
            .iter()
            .find(|c| c.name == "classical-intertwining")
            .unwrap();
        assert!(!act.pass);
        assert!(act.detail.is_some());
    }
}

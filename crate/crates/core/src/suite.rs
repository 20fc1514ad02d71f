//! The composite verification suite behind `verify`: relation checks,
//! dictionary intertwining, truncation-ideal identities, defect stability,
//! and duality checks, merged into one deterministic report.

use crate::category_o;
use crate::error::Result;
use crate::fock;
use crate::indexset::{enumerate, kappa, Shape};
use crate::report::{Family, Report};
use crate::shard;
use crate::superdual::{self, DualityContext};

/// Which families to run, at what level, and over how many workers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub relations: bool,
    pub tpc2: bool,
    pub ideals: bool,
    pub defect: bool,
    pub superdual: bool,
    pub level: u32,
    pub workers: usize,
}

impl VerifyOptions {
    /// Every family enabled.
    pub fn all(level: u32, workers: usize) -> Self {
        VerifyOptions {
            relations: true,
            tpc2: true,
            ideals: true,
            defect: true,
            superdual: true,
            level,
            workers,
        }
    }
}

/// Run the selected families and merge their reports in a fixed order.
/// The effective level is raised to the smallest one displaying every row
/// of the shape, so each family is well-defined.  Output is byte-stable
/// across worker counts.
pub fn run_verify(shape: &Shape, opts: &VerifyOptions) -> Result<Report> {
    let level = opts.level.max(shape.min_level());
    let workers = opts.workers.max(1);
    let js: Vec<i64> = ((1 - i64::from(level))..i64::from(level)).collect();
    let mut report = Report::new();

    if opts.relations {
        let rel = fock::verify_relations(shape, level, &js, workers)?;
        report.absorb(&format!("relations(r={level})"), rel);
    }

    if opts.tpc2 {
        for &j in &js {
            let rep = category_o::tpc2_check(shape, level, j, workers)?;
            report.absorb(&format!("tpc2(r={level},j={j})"), rep);
        }
    }

    if opts.ideals {
        let r0 = shape.min_level();
        for r in r0..level {
            for s in (r + 1)..=level.min(r + 2) {
                let basis = enumerate(shape, s, None)?;
                let chunks = shard::map_chunks(&basis, workers, |chunk| -> Result<Family> {
                    let mut fam = Family::new();
                    for p in chunk {
                        let member = p.in_ideal(r, false)? && !p.in_ideal(r, true)?;
                        let embedded = p.native_level() <= r;
                        fam.check(member == embedded, || {
                            format!("ideal membership at r={r} disagrees with the window of {p}")
                        });
                    }
                    Ok(fam)
                });
                let mut fam = Family::new();
                for chunk in chunks {
                    fam.merge(chunk?);
                }
                let check = fam.into_check(format!("ideals(r={r},s={s}).identity"));
                report.push(check.name, check.pass, check.detail);
            }
        }
    }

    if opts.defect {
        let basis = enumerate(shape, level, None)?;
        let chunks = shard::map_chunks(&basis, workers, |chunk| -> Result<Family> {
            let mut fam = Family::new();
            for p in chunk {
                let here = p.defect_at(level)?;
                let above = p.defect_at(level + 1)?;
                fam.check(here == above, || {
                    format!(
                        "defect changes between levels {level} and {} on {p}",
                        level + 1
                    )
                });
            }
            Ok(fam)
        });
        let mut fam = Family::new();
        for chunk in chunks {
            fam.merge(chunk?);
        }
        let check = fam.into_check(format!("defect(r={level}).level-independence"));
        report.push(check.name, check.pass, check.detail);

        let top = kappa(shape, level)?;
        let value = top.defect_at(level)?;
        report.push(
            format!("defect(r={level}).maximal-element"),
            value == 0,
            (value != 0).then(|| format!("defect of the maximal element is {value}")),
        );
    }

    if opts.superdual {
        let depth = level.min(2);
        let window = i64::from(depth);
        let djs: Vec<i64> = (-window..=window).collect();
        let ctx = DualityContext::new(shape)?;
        let rep = superdual::verify_superduality(&ctx, depth, &djs, workers)?;
        report.absorb(&format!("superdual(depth={depth})"), rep);
    }

    Ok(report)
}

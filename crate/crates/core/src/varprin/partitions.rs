//! Cylinder partitions finer than a cover, enumerated by resolution.

use std::collections::BTreeSet;

use crate::error::{invalid, Result};
use crate::symcore::cover::{CoverSpec, PartitionSpec};
use crate::symcore::cylinder::CylinderUnion;
use crate::symcore::subshift::Subshift;

/// Largest number of block-to-element assignments tried per resolution.
pub const ASSIGNMENT_CAP: u64 = 4096;

/// Partitions finer than `u` with cells that are unions of `r`-blocks on the
/// window of `u`, for `r` up to `max_res`.
///
/// At each resolution: every assignment of `r`-blocks to a containing element
/// (odometer order, the first-containing assignment first; only that one
/// when the count exceeds [`ASSIGNMENT_CAP`]), then the partition into the
/// `r`-blocks themselves. Duplicates are dropped.
pub fn finer_partitions(x: &Subshift, u: &CoverSpec, max_res: usize) -> Result<Vec<PartitionSpec>> {
    let (lo, width) = u.window();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut push = |p: PartitionSpec, out: &mut Vec<PartitionSpec>| {
        if seen.insert(p.canonical_key()) {
            out.push(p);
        }
    };
    if width == 0 {
        push(PartitionSpec::trivial(x), &mut out);
    }
    for r in width.max(1)..=max_res.max(width) {
        let blocks = x.language(r)?;
        let choices: Vec<Vec<usize>> = blocks.iter().map(|b| u.containing(b, lo)).collect();
        if choices.iter().any(|c| c.is_empty()) {
            return Err(invalid("cover misses an admissible block"));
        }
        let total = choices
            .iter()
            .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
            .unwrap_or(u64::MAX);
        let mut digits = vec![0usize; blocks.len()];
        let mut tried = 0u64;
        loop {
            let mut cells: Vec<Vec<Vec<u8>>> = vec![Vec::new(); u.len()];
            for (i, b) in blocks.iter().enumerate() {
                cells[choices[i][digits[i]]].push(b.0.clone());
            }
            let cells: Vec<CylinderUnion> = cells
                .into_iter()
                .filter(|c| !c.is_empty())
                .map(|c| CylinderUnion::from_words(x.ell(), lo, r, c))
                .collect();
            push(PartitionSpec::new(x, cells)?, &mut out);
            tried += 1;
            if total > ASSIGNMENT_CAP || tried >= total {
                break;
            }
            // odometer, last block fastest
            let mut i = blocks.len();
            while i > 0 {
                i -= 1;
                digits[i] += 1;
                if digits[i] < choices[i].len() {
                    break;
                }
                digits[i] = 0;
            }
        }
        push(PartitionSpec::blocks(x, lo, r)?, &mut out);
    }
    Ok(out)
}

/// Short label for a partition.
pub fn describe(p: &PartitionSpec) -> String {
    p.cells().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" | ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::cover::{parse_cover, refines};

    #[test]
    fn full_shift_generator_family() {
        let x = Subshift::full(2).unwrap();
        let u = CoverSpec::generating(&x).unwrap();
        let fam = finer_partitions(&x, &u, 2).unwrap();
        // the generator and the 2-block partition
        assert_eq!(fam.len(), 2);
        for p in &fam {
            assert!(refines(&x, p, &u).unwrap());
        }
    }

    #[test]
    fn overlapping_cover_gives_assignments() {
        let x = Subshift::full(2).unwrap();
        let u = parse_cover(&x, "0 | 1 + 00").unwrap();
        let fam = finer_partitions(&x, &u, 2).unwrap();
        assert!(fam.len() >= 3);
        for p in &fam {
            assert!(refines(&x, p, &u).unwrap());
        }
    }

    #[test]
    fn trivial_cover() {
        let x = Subshift::golden_mean();
        let fam = finer_partitions(&x, &CoverSpec::trivial(&x), 1).unwrap();
        assert_eq!(fam[0].len(), 1);
        assert!(fam.len() >= 2);
    }
}

use std::fmt;

use serde::Serialize;

use crate::caps::Caps;
use crate::error::{invalid, Error, Result};
use crate::symcore::cylinder::CylinderUnion;
use crate::symcore::subshift::Subshift;
use crate::symcore::word::Word;

/// A finite open cover of a subshift by cylinder unions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverSpec {
    elements: Vec<CylinderUnion>,
    lo: i64,
    width: usize,
}

/// A finite partition of a subshift into cylinder unions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionSpec {
    cells: Vec<CylinderUnion>,
    lo: i64,
    width: usize,
}

fn check_alphabet(x: &Subshift, items: &[CylinderUnion]) -> Result<()> {
    if items.iter().any(|u| u.alphabet() != x.ell()) {
        return Err(invalid("cylinder alphabet does not match the subshift"));
    }
    Ok(())
}

impl CoverSpec {
    /// Validates that the elements cover every admissible block at their
    /// common window.
    pub fn new(x: &Subshift, elements: Vec<CylinderUnion>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidCover("a cover needs at least one element".into()));
        }
        check_alphabet(x, &elements)?;
        let (lo, width) = CylinderUnion::common_window(elements.iter());
        for b in x.language_arc(width)?.iter() {
            if !elements.iter().any(|e| e.contains_block(b, lo)) {
                return Err(Error::InvalidCover(format!(
                    "admissible block {b} at position {lo} is not covered"
                )));
            }
        }
        Ok(CoverSpec {
            elements,
            lo,
            width,
        })
    }

    /// The one-element cover `{X}`.
    pub fn trivial(x: &Subshift) -> Self {
        CoverSpec {
            elements: vec![CylinderUnion::whole(x.ell())],
            lo: 0,
            width: 0,
        }
    }

    /// The time-zero symbol partition `{[a] : a admissible}` viewed as a cover.
    pub fn generating(x: &Subshift) -> Result<Self> {
        let cells = PartitionSpec::generating(x)?;
        Ok(CoverSpec {
            elements: cells.cells,
            lo: 0,
            width: 1,
        })
    }

    pub fn elements(&self) -> &[CylinderUnion] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Common window `[lo, lo + width)`; `width` is the resolution L.
    pub fn window(&self) -> (i64, usize) {
        (self.lo, self.width)
    }

    pub fn resolution(&self) -> usize {
        self.width
    }

    /// Indices of elements containing the point with the given block at
    /// `[block_lo, ..)`.
    pub fn containing(&self, block: &[u8], block_lo: i64) -> Vec<usize> {
        (0..self.elements.len())
            .filter(|&i| self.elements[i].contains_block(block, block_lo))
            .collect()
    }

    /// Treats a partition as a cover.
    pub fn from_partition(p: &PartitionSpec) -> Self {
        CoverSpec {
            elements: p.cells.clone(),
            lo: p.lo,
            width: p.width,
        }
    }

    /// Reads the cover as a partition when its elements are disjoint on `x`.
    pub fn as_partition(&self, x: &Subshift) -> Result<Option<PartitionSpec>> {
        for b in x.language_arc(self.width)?.iter() {
            if self.containing(b, self.lo).len() != 1 {
                return Ok(None);
            }
        }
        Ok(Some(PartitionSpec {
            cells: self.elements.clone(),
            lo: self.lo,
            width: self.width,
        }))
    }
}

impl PartitionSpec {
    /// Validates that every admissible block at the common window lies in
    /// exactly one cell.
    pub fn new(x: &Subshift, cells: Vec<CylinderUnion>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidPartition("a partition needs at least one cell".into()));
        }
        if x.ell() != cells[0].alphabet() {
            return Err(Error::InvalidPartition("cell alphabet does not match the subshift".into()));
        }
        let (lo, width) = CylinderUnion::common_window(cells.iter());
        for b in x.language_arc(width)?.iter() {
            let hits = cells.iter().filter(|c| c.contains_block(b, lo)).count();
            if hits == 0 {
                return Err(Error::InvalidPartition(format!(
                    "admissible block {b} at position {lo} lies in no cell"
                )));
            }
            if hits > 1 {
                return Err(Error::InvalidPartition(format!(
                    "admissible block {b} at position {lo} lies in {hits} cells"
                )));
            }
        }
        Ok(PartitionSpec { cells, lo, width })
    }

    /// `{[a] : a admissible}`.
    pub fn generating(x: &Subshift) -> Result<Self> {
        let cells: Vec<CylinderUnion> = x
            .language_arc(1)?
            .iter()
            .map(|w| CylinderUnion::cylinder(x.ell(), 0, w))
            .collect();
        Ok(PartitionSpec {
            cells,
            lo: 0,
            width: 1,
        })
    }

    /// `{X}`.
    pub fn trivial(x: &Subshift) -> Self {
        PartitionSpec {
            cells: vec![CylinderUnion::whole(x.ell())],
            lo: 0,
            width: 0,
        }
    }

    /// Partition into the admissible blocks on `[lo, lo + width)`.
    pub fn blocks(x: &Subshift, lo: i64, width: usize) -> Result<Self> {
        let cells = x
            .language_arc(width)?
            .iter()
            .map(|w| CylinderUnion::cylinder(x.ell(), lo, w))
            .collect();
        Ok(PartitionSpec { cells, lo, width })
    }

    pub fn cells(&self) -> &[CylinderUnion] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn window(&self) -> (i64, usize) {
        (self.lo, self.width)
    }

    /// Index of the cell containing the point with `block` at `[block_lo, ..)`.
    pub fn cell_of(&self, block: &[u8], block_lo: i64) -> Option<usize> {
        self.cells.iter().position(|c| c.contains_block(block, block_lo))
    }

    /// Canonical identity of the partition as a set of sets.
    pub fn canonical_key(&self) -> Vec<CylinderUnion> {
        let mut k = self.cells.clone();
        k.sort();
        k
    }
}

/// The `α`-name `ω(α, N, x)` of length `n`: symbol `i` is the index of the cell
/// containing `T^i x`. The word `x` lists the coordinates starting at
/// `min(lo, 0)` of the partition window.
pub fn code_partition(x: &Subshift, alpha: &PartitionSpec, point: &[u8], n: usize) -> Result<Word> {
    let (lo, width) = alpha.window();
    let offset = (-lo).max(0);
    let need = (offset + lo) as usize + width + n.saturating_sub(1);
    if point.len() < need {
        return Err(invalid(format!(
            "point word has length {} but coding {n} symbols needs {need}",
            point.len()
        )));
    }
    if !x.is_admissible(point)? {
        return Err(invalid("point word is not admissible"));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let start = (offset + lo) as usize + i;
        let block = &point[start..start + width];
        let cell = alpha
            .cell_of(block, lo)
            .ok_or_else(|| Error::InvalidPartition(format!("block {} lies in no cell", Word::from(block))))?;
        if cell > u8::MAX as usize {
            return Err(invalid("too many partition cells to code"));
        }
        out.push(cell as u8);
    }
    Ok(Word(out))
}

/// True iff every cell of `alpha` is contained (on `x`) in some element of `u`.
pub fn refines(x: &Subshift, alpha: &PartitionSpec, u: &CoverSpec) -> Result<bool> {
    let (lo, width) = CylinderUnion::common_window(alpha.cells.iter().chain(u.elements.iter()));
    let blocks = x.language_arc(width)?;
    'cells: for cell in &alpha.cells {
        let inside: Vec<&Word> = blocks.iter().filter(|b| cell.contains_block(b, lo)).collect();
        for e in &u.elements {
            if inside.iter().all(|b| e.contains_block(b, lo)) {
                continue 'cells;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// Parses a cylinder union: `X`, `empty`, or cylinders joined by `+`, each
/// `word` (at position 0) or `@pos:word`.
pub fn parse_union(ell: usize, s: &str, caps: &Caps) -> Result<CylinderUnion> {
    let s = s.trim();
    match s {
        "X" | "x" | "whole" => return Ok(CylinderUnion::whole(ell)),
        "empty" => return Ok(CylinderUnion::empty(ell)),
        _ => {}
    }
    let mut cyls = Vec::new();
    for part in s.split('+') {
        let part = part.trim();
        let (pos, word) = match part.strip_prefix('@') {
            Some(rest) => {
                let (p, w) = rest
                    .split_once(':')
                    .ok_or_else(|| invalid(format!("expected @pos:word, got {part:?}")))?;
                let p: i64 = p.trim().parse().map_err(|_| invalid(format!("bad position {p:?}")))?;
                (p, w.trim())
            }
            None => (0, part),
        };
        let w = Word::parse(word)?;
        if w.is_empty() {
            return Err(invalid("empty cylinder word"));
        }
        cyls.push((pos, w));
    }
    CylinderUnion::from_cylinders(ell, &cyls, caps)
}

/// Parses a cover: `generating`, `trivial`, or unions separated by `|`.
pub fn parse_cover(x: &Subshift, s: &str) -> Result<CoverSpec> {
    match s.trim() {
        "generating" => CoverSpec::generating(x),
        "trivial" => Ok(CoverSpec::trivial(x)),
        other => {
            let elems = other
                .split('|')
                .map(|e| parse_union(x.ell(), e, x.caps()))
                .collect::<Result<Vec<_>>>()?;
            CoverSpec::new(x, elems)
        }
    }
}

/// Parses a partition with the same grammar as [`parse_cover`].
pub fn parse_partition(x: &Subshift, s: &str) -> Result<PartitionSpec> {
    match s.trim() {
        "generating" => PartitionSpec::generating(x),
        "trivial" => Ok(PartitionSpec::trivial(x)),
        other => {
            let cells = other
                .split('|')
                .map(|e| parse_union(x.ell(), e, x.caps()))
                .collect::<Result<Vec<_>>>()?;
            PartitionSpec::new(x, cells)
        }
    }
}

impl fmt::Display for CoverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(" | "))
    }
}

impl fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.cells.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(" | "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full() -> Subshift {
        Subshift::full(2).unwrap()
    }

    #[test]
    fn identity_coding() {
        let x = full();
        let a = PartitionSpec::generating(&x).unwrap();
        let w = Word::parse("0110").unwrap();
        assert_eq!(code_partition(&x, &a, &w, 4).unwrap(), w);
    }

    #[test]
    fn two_block_cells_code_first_symbol() {
        let x = full();
        let a = parse_partition(&x, "00+01|10+11").unwrap();
        let w = Word::parse("01100").unwrap();
        assert_eq!(code_partition(&x, &a, &w, 4).unwrap().to_string(), "0110");
    }

    #[test]
    fn non_covering_partition_rejected() {
        let x = full();
        assert!(matches!(parse_partition(&x, "00|11"), Err(Error::InvalidPartition(_))));
        assert!(matches!(parse_partition(&x, "0|0+1"), Err(Error::InvalidPartition(_))));
        assert!(matches!(parse_cover(&x, "00|11"), Err(Error::InvalidCover(_))));
    }

    #[test]
    fn refinement_examples() {
        let x = full();
        let a = parse_partition(&x, "0|1").unwrap();
        let u = parse_cover(&x, "0|1").unwrap();
        assert!(refines(&x, &a, &u).unwrap());
        let b = parse_partition(&x, "00|01|10|11").unwrap();
        assert!(refines(&x, &b, &u).unwrap());
        let v = parse_cover(&x, "00+11|01+10").unwrap();
        assert!(!refines(&x, &a, &v).unwrap());
    }

    #[test]
    fn covers_are_relative_to_the_subshift() {
        // {[0], [10]} misses 11 in the full shift but not in the golden mean
        let g = Subshift::golden_mean();
        assert!(parse_cover(&g, "0|10").is_ok());
        assert!(parse_cover(&full(), "0|10").is_err());
    }

    #[test]
    fn shifted_window_coding() {
        let x = full();
        let a = parse_partition(&x, "@-1:0|@-1:1").unwrap();
        // coding looks one step into the past
        let w = Word::parse("10110").unwrap();
        assert_eq!(code_partition(&x, &a, &w, 4).unwrap().to_string(), "1011");
    }
}

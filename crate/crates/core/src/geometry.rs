//! Axis-aligned boxes, their interval projections, and the per-axis overlap
//! classification that the pattern decomposition is built on.
//!
//! Coordinates are exact rationals. [`normalize`] replaces every endpoint by
//! its rank on its axis, which puts a collection in general position (no two
//! endpoints on one axis coincide) without changing any strict order that was
//! already present.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Exact coordinate type.
pub type Coord = BigRational;

pub fn coord(v: i64) -> Coord {
    BigRational::from_integer(BigInt::from(v))
}

/// A closed interval `[lo, hi]` of the real line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Coord,
    pub hi: Coord,
}

impl Interval {
    pub fn new(lo: Coord, hi: Coord) -> Result<Self> {
        if lo > hi {
            return Err(Error::Precondition(format!(
                "interval [{lo}, {hi}] has lo > hi"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// Integer-endpoint constructor; panics if `lo > hi`.
    pub fn from_ints(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "interval [{lo}, {hi}] has lo > hi");
        Self {
            lo: coord(lo),
            hi: coord(hi),
        }
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    fn endpoints_distinct(&self, other: &Interval) -> bool {
        self.lo != self.hi
            && other.lo != other.hi
            && self.lo != other.lo
            && self.lo != other.hi
            && self.hi != other.lo
            && self.hi != other.hi
    }
}

/// An axis-aligned box in `R^d`: one closed interval per axis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AxisBox {
    pub id: usize,
    pub sides: Vec<Interval>,
}

impl AxisBox {
    pub fn new(id: usize, sides: Vec<Interval>) -> Self {
        Self { id, sides }
    }

    /// Box from `(lo, hi)` integer pairs, one per axis.
    pub fn from_ints(id: usize, sides: &[(i64, i64)]) -> Self {
        Self {
            id,
            sides: sides
                .iter()
                .map(|&(lo, hi)| Interval::from_ints(lo, hi))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    /// Projection onto axis `axis` (0-based).
    pub fn side(&self, axis: usize) -> &Interval {
        &self.sides[axis]
    }

    /// Closed-box intersection test: every axis overlaps.
    pub fn intersects(&self, other: &AxisBox) -> bool {
        self.sides
            .iter()
            .zip(&other.sides)
            .all(|(a, b)| a.intersects(b))
    }

    /// The same box restricted to its first `axes` coordinates.
    pub fn project_prefix(&self, axes: usize) -> AxisBox {
        AxisBox {
            id: self.id,
            sides: self.sides[..axes].to_vec(),
        }
    }
}

/// How one interval overlaps another when they intersect with four distinct
/// endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OverlapType {
    Contains,
    Contained,
    LeftIntersects,
    RightIntersects,
}

impl OverlapType {
    pub const ALL: [OverlapType; 4] = [
        OverlapType::Contains,
        OverlapType::Contained,
        OverlapType::LeftIntersects,
        OverlapType::RightIntersects,
    ];

    pub fn mirror(self) -> Self {
        match self {
            OverlapType::Contains => OverlapType::Contained,
            OverlapType::Contained => OverlapType::Contains,
            OverlapType::LeftIntersects => OverlapType::RightIntersects,
            OverlapType::RightIntersects => OverlapType::LeftIntersects,
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    fn letter(self) -> char {
        match self {
            OverlapType::Contains => 'C',
            OverlapType::Contained => 'I',
            OverlapType::LeftIntersects => 'L',
            OverlapType::RightIntersects => 'R',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        match c {
            'C' => Some(OverlapType::Contains),
            'I' => Some(OverlapType::Contained),
            'L' => Some(OverlapType::LeftIntersects),
            'R' => Some(OverlapType::RightIntersects),
            _ => None,
        }
    }
}

/// Classify how `a` overlaps `b`. `Ok(None)` means the intervals are disjoint.
///
/// Errors if any two of the four endpoints coincide (or either interval is
/// degenerate), since the classification is only total in general position.
pub fn classify_overlap(a: &Interval, b: &Interval) -> Result<Option<OverlapType>> {
    if !a.endpoints_distinct(b) {
        return Err(Error::SharedEndpoint(format!(
            "[{}, {}] vs [{}, {}]",
            a.lo, a.hi, b.lo, b.hi
        )));
    }
    if a.hi < b.lo || b.hi < a.lo {
        return Ok(None);
    }
    let kind = match (a.lo < b.lo, a.hi < b.hi) {
        (true, false) => OverlapType::Contains,
        (false, true) => OverlapType::Contained,
        (true, true) => OverlapType::LeftIntersects,
        (false, false) => OverlapType::RightIntersects,
    };
    Ok(Some(kind))
}

/// Intersection pattern: one [`OverlapType`] per axis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern(pub Vec<OverlapType>);

impl Pattern {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[OverlapType] {
        &self.0
    }

    pub fn mirror(&self) -> Pattern {
        Pattern(self.0.iter().map(|t| t.mirror()).collect())
    }

    /// Position of the pattern in [`Pattern::all`]; first axis most
    /// significant, so the index order matches `Ord`.
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, t| acc * 4 + t.index())
    }

    pub fn from_index(d: usize, mut index: usize) -> Pattern {
        let mut coords = vec![OverlapType::Contains; d];
        for slot in coords.iter_mut().rev() {
            *slot = OverlapType::ALL[index % 4];
            index /= 4;
        }
        Pattern(coords)
    }

    pub fn count(d: usize) -> usize {
        4usize.pow(d as u32)
    }

    /// All `4^d` patterns in canonical order.
    pub fn all(d: usize) -> Vec<Pattern> {
        (0..Self::count(d)).map(|i| Self::from_index(d, i)).collect()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.0 {
            write!(f, "{}", t.letter())?;
        }
        Ok(())
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .chars()
            .map(|c| {
                OverlapType::from_letter(c.to_ascii_uppercase()).ok_or_else(|| {
                    Error::Precondition(format!(
                        "bad pattern letter {c:?} (expected C, I, L or R)"
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if coords.is_empty() {
            return Err(Error::Precondition("empty pattern".into()));
        }
        Ok(Pattern(coords))
    }
}

pub fn mirror(p: &Pattern) -> Pattern {
    p.mirror()
}

/// Pattern of `b1` with respect to `b2`, or `None` if the boxes are disjoint.
pub fn intersection_pattern(b1: &AxisBox, b2: &AxisBox) -> Result<Option<Pattern>> {
    if b1.dim() != b2.dim() {
        return Err(Error::DimensionMismatch {
            id: b2.id,
            expected: b1.dim(),
            found: b2.dim(),
        });
    }
    let mut coords = Vec::with_capacity(b1.dim());
    for (a, b) in b1.sides.iter().zip(&b2.sides) {
        match classify_overlap(a, b)? {
            Some(t) => coords.push(t),
            None => return Ok(None),
        }
    }
    Ok(Some(Pattern(coords)))
}

/// Check that every box has the same dimension `d >= 1`; returns `d`.
pub fn common_dimension(boxes: &[AxisBox]) -> Result<usize> {
    let first = boxes.first().ok_or(Error::EmptyCollection)?;
    let d = first.dim();
    if d == 0 {
        return Err(Error::Precondition(format!("box {} has dimension 0", first.id)));
    }
    for b in boxes {
        if b.dim() != d {
            return Err(Error::DimensionMismatch {
                id: b.id,
                expected: d,
                found: b.dim(),
            });
        }
    }
    Ok(d)
}

/// Replace every endpoint by its rank on its axis.
///
/// Ties are broken by `(value, box id, lo before hi)`, so a box whose upper
/// endpoint equals another box's lower endpoint closes first when its id is
/// smaller, and zero-width sides open before they close.
#[allow(clippy::needless_range_loop)]
pub fn normalize(boxes: &[AxisBox]) -> Result<Vec<AxisBox>> {
    let d = common_dimension(boxes)?;
    for b in boxes {
        for side in &b.sides {
            if side.lo > side.hi {
                return Err(Error::Precondition(format!(
                    "box {} has an interval with lo > hi",
                    b.id
                )));
            }
        }
    }

    let n = boxes.len();
    let mut ranked: Vec<Vec<(i64, i64)>> = vec![vec![(0, 0); d]; n];
    for axis in 0..d {
        // (position, is_hi)
        let mut events: Vec<(usize, bool)> = Vec::with_capacity(2 * n);
        for pos in 0..n {
            events.push((pos, false));
            events.push((pos, true));
        }
        events.sort_by(|&(pa, ha), &(pb, hb)| {
            let va = endpoint(&boxes[pa], axis, ha);
            let vb = endpoint(&boxes[pb], axis, hb);
            va.cmp(vb)
                .then(boxes[pa].id.cmp(&boxes[pb].id))
                .then(ha.cmp(&hb))
                .then(pa.cmp(&pb))
        });
        for (rank, (pos, is_hi)) in events.into_iter().enumerate() {
            let slot = &mut ranked[pos][axis];
            if is_hi {
                slot.1 = rank as i64;
            } else {
                slot.0 = rank as i64;
            }
        }
    }

    Ok(boxes
        .iter()
        .zip(ranked)
        .map(|(b, sides)| AxisBox::from_ints(b.id, &sides))
        .collect())
}

fn endpoint(b: &AxisBox, axis: usize, hi: bool) -> &Coord {
    if hi {
        &b.sides[axis].hi
    } else {
        &b.sides[axis].lo
    }
}

/// True iff on every axis all `2n` endpoints are pairwise distinct and every
/// side has positive length.
pub fn in_general_position(boxes: &[AxisBox]) -> bool {
    let Ok(d) = common_dimension(boxes) else {
        return false;
    };
    (0..d).all(|axis| {
        let mut values: Vec<&Coord> = boxes
            .iter()
            .flat_map(|b| [&b.sides[axis].lo, &b.sides[axis].hi])
            .collect();
        values.sort();
        values.windows(2).all(|w| w[0].cmp(w[1]) == Ordering::Less)
            && boxes.iter().all(|b| b.sides[axis].lo < b.sides[axis].hi)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::from_ints(lo, hi)
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_overlap(&iv(0, 3), &iv(1, 2)).unwrap(),
            Some(OverlapType::Contains)
        );
        assert_eq!(
            classify_overlap(&iv(1, 2), &iv(0, 3)).unwrap(),
            Some(OverlapType::Contained)
        );
        assert_eq!(
            classify_overlap(&iv(0, 2), &iv(1, 3)).unwrap(),
            Some(OverlapType::LeftIntersects)
        );
        assert_eq!(
            classify_overlap(&iv(1, 3), &iv(0, 2)).unwrap(),
            Some(OverlapType::RightIntersects)
        );
        assert_eq!(classify_overlap(&iv(0, 1), &iv(2, 3)).unwrap(), None);
    }

    #[test]
    fn classify_rejects_shared_endpoints() {
        assert!(matches!(
            classify_overlap(&iv(0, 1), &iv(1, 2)),
            Err(Error::SharedEndpoint(_))
        ));
        assert!(classify_overlap(&iv(0, 2), &iv(0, 3)).is_err());
        assert!(classify_overlap(&iv(1, 1), &iv(0, 3)).is_err());
    }

    #[test]
    fn pattern_examples() {
        let outer = AxisBox::from_ints(0, &[(0, 10), (0, 10)]);
        let inner = AxisBox::from_ints(1, &[(2, 5), (3, 7)]);
        assert_eq!(
            intersection_pattern(&outer, &inner).unwrap().unwrap(),
            Pattern(vec![OverlapType::Contains, OverlapType::Contains])
        );

        let b1 = AxisBox::from_ints(0, &[(0, 2), (1, 3)]);
        let b2 = AxisBox::from_ints(1, &[(1, 3), (0, 2)]);
        let p = intersection_pattern(&b1, &b2).unwrap().unwrap();
        assert_eq!(
            p,
            Pattern(vec![OverlapType::LeftIntersects, OverlapType::RightIntersects])
        );
        assert_eq!(intersection_pattern(&b2, &b1).unwrap().unwrap(), p.mirror());
    }

    #[test]
    fn mirror_examples() {
        let p = Pattern(vec![OverlapType::Contains]);
        assert_eq!(p.mirror(), Pattern(vec![OverlapType::Contained]));
        let q = Pattern(vec![OverlapType::LeftIntersects, OverlapType::RightIntersects]);
        assert_eq!(
            q.mirror(),
            Pattern(vec![OverlapType::RightIntersects, OverlapType::LeftIntersects])
        );
        for p in Pattern::all(2) {
            assert_eq!(mirror(&mirror(&p)), p);
            assert_ne!(p.mirror(), p);
        }
    }

    #[test]
    fn pattern_indexing_is_canonical() {
        for d in 1..=3 {
            let all = Pattern::all(d);
            assert_eq!(all.len(), 4usize.pow(d as u32));
            for (i, p) in all.iter().enumerate() {
                assert_eq!(p.index(), i);
                assert_eq!(p.to_string().parse::<Pattern>().unwrap(), *p);
            }
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn normalize_shared_endpoint_closes_earlier_id_first() {
        let boxes = vec![
            AxisBox::from_ints(0, &[(0, 1)]),
            AxisBox::from_ints(1, &[(1, 2)]),
        ];
        let out = normalize(&boxes).unwrap();
        assert!(in_general_position(&out));
        assert!(!out[0].intersects(&out[1]));
        assert_eq!(out[0].sides[0], iv(0, 1));
        assert_eq!(out[1].sides[0], iv(2, 3));
    }

    #[test]
    fn normalize_keeps_general_position_order() {
        let boxes = vec![
            AxisBox::from_ints(0, &[(10, 40), (-5, 7)]),
            AxisBox::from_ints(1, &[(20, 30), (1, 9)]),
        ];
        let out = normalize(&boxes).unwrap();
        for axis in 0..2 {
            let before: Vec<_> = boxes
                .iter()
                .flat_map(|b| [b.sides[axis].lo.clone(), b.sides[axis].hi.clone()])
                .collect();
            let after: Vec<_> = out
                .iter()
                .flat_map(|b| [b.sides[axis].lo.clone(), b.sides[axis].hi.clone()])
                .collect();
            for i in 0..before.len() {
                for j in 0..before.len() {
                    assert_eq!(before[i].cmp(&before[j]), after[i].cmp(&after[j]));
                }
            }
        }
    }

    #[test]
    fn normalize_widens_zero_width_sides() {
        let boxes = vec![AxisBox::from_ints(0, &[(3, 3), (1, 1)])];
        let out = normalize(&boxes).unwrap();
        assert!(in_general_position(&out));
    }

    #[test]
    fn normalize_errors() {
        assert!(matches!(normalize(&[]), Err(Error::EmptyCollection)));
        let mixed = vec![
            AxisBox::from_ints(0, &[(0, 1)]),
            AxisBox::from_ints(1, &[(0, 1), (0, 1)]),
        ];
        assert!(matches!(
            normalize(&mixed),
            Err(Error::DimensionMismatch { id: 1, .. })
        ));
    }
}

//! Partitions, extended diagrams, squares and the FCC frames.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::DiagramError;

/// Box (a,b): row a, column b, both 1-indexed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub a: u32,
    pub b: u32,
}

impl Cell {
    pub const fn new(a: u32, b: u32) -> Self {
        Cell { a, b }
    }
}

/// Point of the FCC lattice, i + j + k odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FccPoint {
    pub i: i64,
    pub j: i64,
    pub k: i64,
}

impl FccPoint {
    pub fn new(i: i64, j: i64, k: i64) -> Result<Self, DiagramError> {
        if (i + j + k).rem_euclid(2) != 1 {
            return Err(DiagramError::Parity(i, j, k));
        }
        Ok(FccPoint { i, j, k })
    }

    pub(crate) const fn raw(i: i64, j: i64, k: i64) -> Self {
        FccPoint { i, j, k }
    }
}

impl fmt::Display for FccPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Square {
    pub nw: Cell,
    pub size: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, DiagramError> {
        if parts.iter().any(|&p| p == 0) {
            return Err(DiagramError::NonPositivePart);
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(DiagramError::NotWeaklyDecreasing);
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of rows N.
    pub fn rows(&self) -> u32 {
        self.0.len() as u32
    }

    /// Length of the first row.
    pub fn first(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Row length λ_a, zero beyond the last row.
    pub fn row(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        self.0.get(a as usize - 1).copied().unwrap_or(0)
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.a >= 1 && c.b >= 1 && c.b <= self.row(c.a)
    }

    /// Boxes in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (1..=len).map(move |b| Cell::new(r as u32 + 1, b)))
    }

    /// λ*: λ plus the border strip.
    pub fn extended(&self) -> Partition {
        let mut parts = Vec::with_capacity(self.0.len() + 1);
        parts.push(self.first() + 1);
        parts.extend(self.0.iter().map(|p| p + 1));
        Partition(parts)
    }

    /// Drops the first row and the first column.
    pub fn strip_first_row_col(&self) -> Partition {
        Partition(
            self.0
                .iter()
                .skip(1)
                .filter(|&&p| p > 1)
                .map(|p| p - 1)
                .collect(),
        )
    }

    /// λ_{a,b}: the part of λ weakly south-east of (a,b).
    pub fn se_subdiagram(&self, a: u32, b: u32) -> Result<Partition, DiagramError> {
        let c = Cell::new(a, b);
        if !self.contains(c) {
            return Err(DiagramError::BoxOutside(c));
        }
        Ok(self.se_region(a, b))
    }

    /// Like `se_subdiagram` but empty when (a,b) is outside.
    pub fn se_region(&self, a: u32, b: u32) -> Partition {
        Partition(
            (a..=self.rows())
                .map(|r| self.row(r))
                .take_while(|&len| len >= b)
                .map(|len| len - b + 1)
                .collect(),
        )
    }

    pub fn subdiagrams(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        sub_rec(&self.0, u32::MAX, &mut cur, &mut out);
        out
    }

    pub fn pyramid_layers(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = self.clone();
        while !cur.is_empty() {
            let next = cur.strip_first_row_col();
            out.push(cur);
            cur = next;
        }
        out
    }

    /// Largest square with NW corner (a,b) inside `self`.
    pub fn square_at(&self, a: u32, b: u32) -> Result<Square, DiagramError> {
        let c = Cell::new(a, b);
        if !self.contains(c) {
            return Err(DiagramError::BoxOutside(c));
        }
        let mut n = 1;
        while self.contains(Cell::new(a + n, b + n)) {
            n += 1;
        }
        Ok(Square { nw: c, size: n })
    }

    /// Does the m×m square with NW corner (a,b) fit?
    pub fn fits_square(&self, a: u32, b: u32, m: u32) -> bool {
        m >= 1 && self.contains(Cell::new(a, b)) && self.contains(Cell::new(a + m - 1, b + m - 1))
    }

    /// Partitions of exactly `n`, in reverse lexicographic order.
    pub fn all_of_size(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        parts_rec(n, n, &mut cur, &mut out);
        out
    }

    /// Nonempty partitions of size at most `n`, by size.
    pub fn all_up_to(n: u32) -> Vec<Partition> {
        (1..=n).flat_map(Partition::all_of_size).collect()
    }
}

fn sub_rec(rows: &[u32], cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    match rows.split_first() {
        None => {
            let trimmed: Vec<u32> = cur.iter().copied().take_while(|&p| p > 0).collect();
            out.push(Partition(trimmed));
        }
        Some((&r, rest)) => {
            for v in 0..=r.min(cap) {
                cur.push(v);
                sub_rec(rest, v, cur, out);
                cur.pop();
            }
        }
    }
}

fn parts_rec(n: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if n == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    for p in (1..=n.min(cap)).rev() {
        cur.push(p);
        parts_rec(n - p, p, cur, out);
        cur.pop();
    }
}

impl FromStr for Partition {
    type Err = DiagramError;
    fn from_str(s: &str) -> Result<Self, DiagramError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for tok in s.split(',') {
            let v: i64 = tok.trim().parse().map_err(|_| DiagramError::Malformed)?;
            if v <= 0 {
                return Err(DiagramError::NonPositivePart);
            }
            parts.push(u32::try_from(v).map_err(|_| DiagramError::Malformed)?);
        }
        Partition::new(parts)
    }
}

pub fn parse_partition(text: &str) -> Result<Partition, DiagramError> {
    text.parse()
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, ")")
    }
}

/// Planar coordinates of boxes in the i = 1 plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    /// j = λ₁ + a − b, k = λ₁ + 2 − a − b.
    Steepest,
    /// j = b − a, k = 2N + 2 − a − b; centered on the main diagonal.
    Walls,
}

impl Frame {
    pub fn plane(self, lam: &Partition, c: Cell) -> (i64, i64) {
        let (a, b) = (c.a as i64, c.b as i64);
        match self {
            Frame::Steepest => {
                let l1 = lam.first() as i64;
                (l1 + a - b, l1 + 2 - a - b)
            }
            Frame::Walls => {
                let n = lam.rows() as i64;
                (b - a, 2 * n + 2 - a - b)
            }
        }
    }

    /// FCC point of the box in the i = 1 plane.
    pub fn point(self, lam: &Partition, c: Cell) -> FccPoint {
        let (j, k) = self.plane(lam, c);
        FccPoint::raw(1, j, k)
    }

    /// Apex over the m×m square with NW corner `nw`.
    pub fn apex(self, lam: &Partition, nw: Cell, m: u32) -> FccPoint {
        let (j, k) = self.plane(lam, nw);
        FccPoint::raw(m as i64, j, k - (m as i64 - 1))
    }
}

pub fn box_to_fcc(lam: &Partition, a: u32, b: u32) -> Result<FccPoint, DiagramError> {
    let c = Cell::new(a, b);
    if !lam.extended().contains(c) {
        return Err(DiagramError::BoxOutside(c));
    }
    Ok(Frame::Steepest.point(lam, c))
}

/// Border boxes of λ*\λ in a frame, one vertex per column j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPath {
    pub vertices: Vec<(i64, i64)>,
}

impl BoundaryPath {
    pub fn in_frame(lam: &Partition, frame: Frame) -> Result<Self, DiagramError> {
        if lam.is_empty() {
            return Err(DiagramError::EmptyPartition);
        }
        let star = lam.extended();
        let mut v: Vec<(i64, i64)> = star
            .cells()
            .filter(|&c| !lam.contains(c))
            .map(|c| frame.plane(lam, c))
            .collect();
        v.sort();
        Ok(BoundaryPath { vertices: v })
    }

    /// Interior vertices where the direction of the path changes.
    pub fn turning_points(&self) -> Vec<(i64, i64)> {
        self.vertices
            .windows(3)
            .filter(|w| (w[1].1 - w[0].1) != (w[2].1 - w[1].1))
            .map(|w| w[1])
            .collect()
    }

    /// Lengths of the maximal straight runs.
    pub fn segment_lengths(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut run = 0u32;
        let mut dir = 0i64;
        for w in self.vertices.windows(2) {
            let d = w[1].1 - w[0].1;
            if run > 0 && d != dir {
                out.push(run);
                run = 0;
            }
            dir = d;
            run += 1;
        }
        if run > 0 {
            out.push(run);
        }
        out
    }
}

pub fn boundary_path(lam: &Partition) -> Result<BoundaryPath, DiagramError> {
    BoundaryPath::in_frame(lam, Frame::Steepest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn lam(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn parsing() {
        assert_eq!(lam("2,1").parts(), &[2, 1]);
        assert_eq!(lam("5,4,4,4,2").parts(), &[5, 4, 4, 4, 2]);
        assert_eq!(
            parse_partition("1,2"),
            Err(DiagramError::NotWeaklyDecreasing)
        );
        assert_eq!(parse_partition("2,0"), Err(DiagramError::NonPositivePart));
        assert_eq!(parse_partition("2,x"), Err(DiagramError::Malformed));
        assert!(parse_partition("").unwrap().is_empty());
    }

    #[test]
    fn extended_diagrams() {
        assert_eq!(lam("3,2").extended(), lam("4,4,3"));
        assert_eq!(lam("2,1").extended(), lam("3,3,2"));
        assert_eq!(lam("1").extended(), lam("2,2"));
        assert_eq!(lam("4,1,1").extended().strip_first_row_col(), lam("4,1,1"));
    }

    #[test]
    fn se_subdiagrams() {
        let l = lam("5,4,4,4,2");
        assert_eq!(l.se_subdiagram(1, 1).unwrap(), l);
        assert_eq!(l.se_subdiagram(2, 2).unwrap(), lam("3,3,3,1"));
        assert_eq!(lam("2,1").se_subdiagram(2, 1).unwrap(), lam("1"));
        assert_eq!(
            lam("2,1").se_subdiagram(2, 2),
            Err(DiagramError::BoxOutside(Cell::new(2, 2)))
        );
    }

    #[test]
    fn squares() {
        let star = lam("2,1").extended();
        assert_eq!(star.square_at(1, 1).unwrap().size, 2);
        assert_eq!(star.square_at(2, 2).unwrap().size, 1);
        assert_eq!(star.square_at(1, 3).unwrap().size, 1);
        assert!(star.square_at(3, 3).is_err());
    }

    #[test]
    fn subdiagram_enumeration() {
        let s = lam("2,1").subdiagrams();
        assert_eq!(s, vec![lam(""), lam("1"), lam("1,1"), lam("2"), lam("2,1")]);
        assert_eq!(lam("1").subdiagrams().len(), 2);
        assert_eq!(lam("2,2").subdiagrams().len(), 6);
    }

    #[test]
    fn pyramids() {
        assert_eq!(
            lam("4,4,3").pyramid_layers(),
            vec![lam("4,4,3"), lam("3,2"), lam("1")]
        );
        assert_eq!(lam("1").pyramid_layers(), vec![lam("1")]);
        assert_eq!(lam("2,2").pyramid_layers(), vec![lam("2,2"), lam("1")]);
    }

    #[test]
    fn fcc_points() {
        let l = lam("2,1");
        assert_eq!(box_to_fcc(&l, 1, 1).unwrap(), FccPoint::raw(1, 2, 2));
        assert_eq!(box_to_fcc(&l, 3, 1).unwrap(), FccPoint::raw(1, 4, 0));
        assert_eq!(box_to_fcc(&l, 1, 3).unwrap(), FccPoint::raw(1, 0, 0));
        assert!(box_to_fcc(&l, 3, 3).is_err());
        assert!(FccPoint::new(1, 1, 1).is_ok());
        assert!(FccPoint::new(1, 1, 0).is_err());
    }

    #[test]
    fn boundary_paths() {
        let p = boundary_path(&lam("2,1")).unwrap();
        assert_eq!(p.vertices, vec![(0, 0), (1, -1), (2, 0), (3, -1), (4, 0)]);
        assert_eq!(p.turning_points(), vec![(1, -1), (2, 0), (3, -1)]);
        let p = boundary_path(&lam("1")).unwrap();
        assert_eq!(p.vertices, vec![(0, 0), (1, -1), (2, 0)]);
        let p = boundary_path(&lam("3,1,1")).unwrap();
        assert_eq!(p.segment_lengths(), vec![1, 2, 2, 1]);
        assert!(boundary_path(&Partition::empty()).is_err());
    }

    #[test]
    fn walls_frame() {
        let l = lam("2,2");
        let p = BoundaryPath::in_frame(&l, Frame::Walls).unwrap();
        assert_eq!(p.vertices, vec![(-2, 2), (-1, 1), (0, 0), (1, 1), (2, 2)]);
        assert_eq!(
            Frame::Walls.apex(&l, Cell::new(1, 1), 2),
            FccPoint::raw(2, 0, 3)
        );
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| Partition::all_of_size(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
        assert_eq!(Partition::all_up_to(8).len(), 66);
    }
}

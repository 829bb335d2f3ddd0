//! Memoized octahedron recurrence above a stepped surface.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::det::determinant;
use crate::diagrams::{boundary_path, Cell, FccPoint, Frame, Partition};
use crate::error::EngineError;
use crate::laurent::{LaurentPoly, VarId, VarTable};
use crate::surfaces::{
    assign_theta, plain_data, steepest_surface, vertical_wall_surface, InitialData, SteppedSurface,
};

pub const DEFAULT_MARGIN: u32 = 2;

#[derive(Clone, Debug)]
pub struct SolutionTable {
    surface: SteppedSurface,
    data: InitialData,
    memo: BTreeMap<FccPoint, LaurentPoly>,
}

impl SolutionTable {
    pub fn new(surface: SteppedSurface, data: InitialData) -> Result<Self, EngineError> {
        if !data.matches(&surface) {
            return Err(EngineError::SurfaceMismatch);
        }
        Ok(SolutionTable {
            surface,
            data,
            memo: BTreeMap::new(),
        })
    }

    pub fn surface(&self) -> &SteppedSurface {
        &self.surface
    }

    pub fn data(&self) -> &InitialData {
        &self.data
    }

    pub fn memo(&self) -> &BTreeMap<FccPoint, LaurentPoly> {
        &self.memo
    }

    /// The five points `p` depends on, or `None` for a base point.
    fn deps(&self, p: FccPoint) -> Result<Option<[FccPoint; 5]>, EngineError> {
        if p.i == 0 {
            return Ok(None);
        }
        let h = match (p.i > 0).then(|| self.surface.height(p.i, p.j)).flatten() {
            Some(h) => h,
            None => return Err(EngineError::OutsideDomain(p)),
        };
        if p.k < h || (p.k - h) % 2 != 0 {
            return Err(EngineError::OutsideDomain(p));
        }
        if p.k == h {
            return Ok(None);
        }
        let (i, j, k) = (p.i, p.j, p.k);
        Ok(Some([
            FccPoint {
                i: i + 1,
                j,
                k: k - 1,
            },
            FccPoint {
                i: i - 1,
                j,
                k: k - 1,
            },
            FccPoint {
                i,
                j: j + 1,
                k: k - 1,
            },
            FccPoint {
                i,
                j: j - 1,
                k: k - 1,
            },
            FccPoint { i, j, k: k - 2 },
        ]))
    }

    fn base(&self, p: FccPoint) -> LaurentPoly {
        if p.i == 0 {
            LaurentPoly::one()
        } else {
            self.data.get(p.i, p.j).cloned().unwrap_or_default()
        }
    }

    pub fn solve(&mut self, p: FccPoint) -> Result<LaurentPoly, EngineError> {
        if let Some(v) = self.memo.get(&p) {
            return Ok(v.clone());
        }
        let mut stack = vec![p];
        while let Some(&top) = stack.last() {
            if self.memo.contains_key(&top) {
                stack.pop();
                continue;
            }
            let deps = match self.deps(top)? {
                None => {
                    let v = self.base(top);
                    self.memo.insert(top, v);
                    stack.pop();
                    continue;
                }
                Some(d) => d,
            };
            let missing: Vec<FccPoint> = deps
                .iter()
                .copied()
                .filter(|d| !self.memo.contains_key(d))
                .collect();
            if !missing.is_empty() {
                stack.extend(missing);
                continue;
            }
            let v = |q: &FccPoint| &self.memo[q];
            let num = &(v(&deps[0]) * v(&deps[1])) + &(v(&deps[2]) * v(&deps[3]));
            let val = num
                .exact_div(v(&deps[4]))
                .map_err(|_| EngineError::Inexact(top))?;
            self.memo.insert(top, val);
            stack.pop();
        }
        Ok(self.memo[&p].clone())
    }

    /// i×i determinant of plane-1 values below (i,j,k).
    pub fn wronskian(&mut self, i: i64, j: i64, k: i64) -> Result<LaurentPoly, EngineError> {
        let m = i.max(0) as usize;
        let mut rows = Vec::with_capacity(m);
        for al in 1..=i {
            let mut row = Vec::with_capacity(m);
            for be in 1..=i {
                row.push(self.solve(FccPoint {
                    i: 1,
                    j: j + be - al,
                    k: k + i + 1 - al - be,
                })?);
            }
            rows.push(row);
        }
        Ok(determinant(&rows)?)
    }
}

/// Entries keyed by (a, b, m).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolynomialTable {
    pub entries: BTreeMap<(u32, u32, u32), LaurentPoly>,
}

impl PolynomialTable {
    pub fn get(&self, a: u32, b: u32, m: u32) -> Option<&LaurentPoly> {
        self.entries.get(&(a, b, m))
    }
}

/// Recurrence above the steepest surface with θ initial data.
#[derive(Clone, Debug)]
pub struct SteepestSystem {
    pub lam: Partition,
    pub star: Partition,
    pub table: VarTable,
    pub thetas: BTreeMap<Cell, VarId>,
    pub solver: SolutionTable,
}

impl SteepestSystem {
    pub fn new(lam: &Partition, margin: u32) -> Result<Self, EngineError> {
        let path = boundary_path(lam)?;
        let surface = steepest_surface(&path, margin)?;
        let mut table = VarTable::new();
        let (data, thetas) = assign_theta(lam, &surface, &mut table)?;
        let solver = SolutionTable::new(surface, data)?;
        Ok(SteepestSystem {
            lam: lam.clone(),
            star: lam.extended(),
            table,
            thetas,
            solver,
        })
    }

    pub fn theta(&self, c: Cell) -> Option<LaurentPoly> {
        self.thetas.get(&c).map(|&v| LaurentPoly::var(v))
    }

    pub fn point(&self, c: Cell) -> FccPoint {
        Frame::Steepest.point(&self.lam, c)
    }

    pub fn p(&mut self, a: u32, b: u32) -> Result<LaurentPoly, EngineError> {
        let c = Cell::new(a, b);
        if !self.star.contains(c) {
            return Err(crate::error::DiagramError::BoxOutside(c).into());
        }
        let pt = self.point(c);
        self.solver.solve(pt)
    }

    /// p_{a,b,m}: recurrence at the apex, checked against the m×m determinant.
    pub fn pyramid(&mut self, a: u32, b: u32, m: u32) -> Result<LaurentPoly, EngineError> {
        if !self.star.fits_square(a, b, m) {
            return Err(EngineError::SquareDoesNotFit { a, b, m });
        }
        let apex = Frame::Steepest.apex(&self.lam, Cell::new(a, b), m);
        let v = self.solver.solve(apex)?;
        let d = self.p_determinant(a, b, m)?;
        if v != d {
            return Err(EngineError::InternalMismatch("pyramid apex vs determinant"));
        }
        Ok(v)
    }

    pub fn p_determinant(&mut self, a: u32, b: u32, m: u32) -> Result<LaurentPoly, EngineError> {
        let mut rows = Vec::new();
        for r in 0..m {
            let mut row = Vec::new();
            for s in 0..m {
                row.push(self.p(a + r, b + s)?);
            }
            rows.push(row);
        }
        Ok(determinant(&rows)?)
    }

    pub fn p_table(&mut self) -> Result<PolynomialTable, EngineError> {
        let mut t = PolynomialTable::default();
        for c in self.star.clone().cells() {
            let v = self.p(c.a, c.b)?;
            t.entries.insert((c.a, c.b, 1), v);
        }
        Ok(t)
    }

    /// All valid (a, b, m) with m ≥ 2.
    pub fn pyramid_squares(&self) -> Vec<(u32, u32, u32)> {
        let mut out = Vec::new();
        for c in self.star.cells() {
            let n = self.star.square_at(c.a, c.b).map(|s| s.size).unwrap_or(1);
            for m in 2..=n {
                out.push((c.a, c.b, m));
            }
        }
        out
    }
}

pub fn p_polynomials(lam: &Partition) -> Result<(SteepestSystem, PolynomialTable), EngineError> {
    let mut sys = SteepestSystem::new(lam, DEFAULT_MARGIN)?;
    let t = sys.p_table()?;
    Ok((sys, t))
}

pub fn pyramid_polynomial(
    lam: &Partition,
    a: u32,
    b: u32,
    m: u32,
) -> Result<LaurentPoly, EngineError> {
    SteepestSystem::new(lam, DEFAULT_MARGIN)?.pyramid(a, b, m)
}

/// First box of λ* whose square determinant differs from θ, if any.
pub fn check_condet(
    lam: &Partition,
    table: &PolynomialTable,
    thetas: &BTreeMap<Cell, VarId>,
) -> Result<(), Cell> {
    let star = lam.extended();
    for c in star.cells() {
        let n = star.square_at(c.a, c.b).map_err(|_| c)?.size;
        let mut rows = Vec::new();
        for r in 0..n {
            let mut row = Vec::new();
            for s in 0..n {
                row.push(table.get(c.a + r, c.b + s, 1).cloned().ok_or(c)?);
            }
            rows.push(row);
        }
        let d = determinant(&rows).map_err(|_| c)?;
        let th = thetas.get(&c).map(|&v| LaurentPoly::var(v)).ok_or(c)?;
        if d != th {
            return Err(c);
        }
    }
    Ok(())
}

/// Solves the determinant system directly, boxes taken in decreasing a + b.
pub fn triangular_solve(
    lam: &Partition,
    thetas: &BTreeMap<Cell, VarId>,
) -> Result<PolynomialTable, EngineError> {
    let star = lam.extended();
    let mut cells: Vec<Cell> = star.cells().collect();
    cells.sort_by(|x, y| (y.a + y.b).cmp(&(x.a + x.b)).then(x.cmp(y)));
    let mut out = PolynomialTable::default();
    for c in cells {
        let n = star.square_at(c.a, c.b)?.size;
        let th = thetas
            .get(&c)
            .map(|&v| LaurentPoly::var(v))
            .ok_or(EngineError::SurfaceMismatch)?;
        let val = if n == 1 {
            th
        } else {
            let entry = |r: u32, s: u32| -> Result<LaurentPoly, EngineError> {
                if r == 0 && s == 0 {
                    return Ok(LaurentPoly::zero());
                }
                out.get(c.a + r, c.b + s, 1)
                    .cloned()
                    .ok_or(EngineError::InternalMismatch("triangular order"))
            };
            let mut rows = Vec::new();
            let mut minor = Vec::new();
            for r in 0..n {
                let mut row = Vec::new();
                for s in 0..n {
                    row.push(entry(r, s)?);
                }
                if r > 0 {
                    minor.push(row[1..].to_vec());
                }
                rows.push(row);
            }
            let d0 = determinant(&rows)?;
            let dm = determinant(&minor)?;
            (&th - &d0).exact_div(&dm)?
        };
        out.entries.insert((c.a, c.b, 1), val);
    }
    Ok(out)
}

/// Recurrence above the vertical-wall surface with `t[i,j]` data.
#[derive(Clone, Debug)]
pub struct WallSystem {
    pub lam: Partition,
    pub table: VarTable,
    pub solver: SolutionTable,
}

impl WallSystem {
    pub fn new(lam: &Partition, margin: u32) -> Result<Self, EngineError> {
        let surface = vertical_wall_surface(lam, margin)?;
        let mut table = VarTable::new();
        let data = plain_data(&surface, &mut table);
        let solver = SolutionTable::new(surface, data)?;
        Ok(WallSystem {
            lam: lam.clone(),
            table,
            solver,
        })
    }

    pub fn point(&self, c: Cell) -> FccPoint {
        Frame::Walls.point(&self.lam, c)
    }

    /// q_{a,b,m} at the apex over the m×m square of λ at (a,b).
    pub fn q(&mut self, a: u32, b: u32, m: u32) -> Result<LaurentPoly, EngineError> {
        if !self.lam.fits_square(a, b, m) {
            return Err(EngineError::SquareDoesNotFit { a, b, m });
        }
        let apex = Frame::Walls.apex(&self.lam, Cell::new(a, b), m);
        self.solver.solve(apex)
    }

    pub fn q_table(&mut self) -> Result<PolynomialTable, EngineError> {
        let mut t = PolynomialTable::default();
        for c in self.lam.clone().cells() {
            let n = self.lam.square_at(c.a, c.b)?.size;
            for m in 1..=n {
                let v = self.q(c.a, c.b, m)?;
                t.entries.insert((c.a, c.b, m), v);
            }
        }
        Ok(t)
    }
}

pub fn q_polynomials(lam: &Partition) -> Result<(WallSystem, PolynomialTable), EngineError> {
    let mut sys = WallSystem::new(lam, DEFAULT_MARGIN)?;
    let t = sys.q_table()?;
    Ok((sys, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn single_box() {
        let (mut sys, t) = p_polynomials(&lam("1")).unwrap();
        let th = {
            let sys = sys.clone();
            move |a, b| sys.theta(Cell::new(a, b)).unwrap()
        };
        let want = (&th(1, 1) + &(&th(1, 2) * &th(2, 1)))
            .exact_div(&th(2, 2))
            .unwrap();
        assert_eq!(t.get(1, 1, 1), Some(&want));
        assert_eq!(t.get(1, 2, 1), Some(&th(1, 2)));
        assert_eq!(sys.p(2, 2).unwrap(), th(2, 2));
    }

    #[test]
    fn oracle_agrees() {
        for s in ["2,1", "3,3,1", "4,2,2,1"] {
            let (sys, t) = p_polynomials(&lam(s)).unwrap();
            assert_eq!(check_condet(&sys.lam, &t, &sys.thetas), Ok(()));
            assert_eq!(triangular_solve(&sys.lam, &sys.thetas).unwrap(), t);
        }
    }

    #[test]
    fn surface_vertex_is_its_variable() {
        let mut sys = SteepestSystem::new(&lam("2,1"), 1).unwrap();
        let v = sys.solver.solve(FccPoint { i: 2, j: 2, k: 1 }).unwrap();
        assert_eq!(v, sys.theta(Cell::new(1, 1)).unwrap());
        assert!(matches!(
            sys.solver.solve(FccPoint { i: 1, j: 2, k: -2 }),
            Err(EngineError::OutsideDomain(_))
        ));
    }

    #[test]
    fn pyramid_forced_value() {
        let mut sys = SteepestSystem::new(&lam("2,1"), 2).unwrap();
        assert_eq!(
            sys.pyramid(1, 1, 2).unwrap(),
            sys.theta(Cell::new(1, 1)).unwrap()
        );
        assert_eq!(sys.pyramid(2, 1, 1).unwrap(), sys.p(2, 1).unwrap());
        assert!(sys.pyramid(2, 2, 2).is_err());
    }
}

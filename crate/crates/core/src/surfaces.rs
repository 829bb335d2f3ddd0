//! Stepped surfaces carrying initial data for the recurrence.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::diagrams::{BoundaryPath, Cell, Frame, Partition};
use crate::error::EngineError;
use crate::laurent::{LaurentPoly, VarId, VarTable};

/// Height map (i, j) → k for planes i ≥ 1; the plane i = 0 is implicit and carries 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteppedSurface {
    heights: BTreeMap<(i64, i64), i64>,
}

impl SteppedSurface {
    pub fn from_heights(heights: BTreeMap<(i64, i64), i64>) -> Self {
        SteppedSurface { heights }
    }

    pub fn height(&self, i: i64, j: i64) -> Option<i64> {
        self.heights.get(&(i, j)).copied()
    }

    pub fn heights(&self) -> &BTreeMap<(i64, i64), i64> {
        &self.heights
    }

    /// Trace k_{1,j} as a sorted list.
    pub fn trace(&self) -> Vec<(i64, i64)> {
        self.heights
            .iter()
            .filter(|(&(i, _), _)| i == 1)
            .map(|(&(_, j), &k)| (j, k))
            .collect()
    }

    pub fn j_range(&self) -> (i64, i64) {
        let t = self.trace();
        (t.first().map_or(0, |p| p.0), t.last().map_or(-1, |p| p.0))
    }

    pub fn depth(&self) -> i64 {
        self.heights.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    /// Reflection j → −j.
    pub fn mirrored(&self) -> SteppedSurface {
        SteppedSurface {
            heights: self
                .heights
                .iter()
                .map(|(&(i, j), &k)| ((i, -j), k))
                .collect(),
        }
    }
}

/// Extends a path by `margin` zigzag steps at each end.
fn extend(path: &[(i64, i64)], margin: u32) -> Result<BTreeMap<i64, i64>, EngineError> {
    if path.is_empty() {
        return Err(EngineError::InvalidPath);
    }
    for w in path.windows(2) {
        if w[1].0 != w[0].0 + 1 || (w[1].1 - w[0].1).abs() != 1 {
            return Err(EngineError::InvalidPath);
        }
    }
    let mut kj: BTreeMap<i64, i64> = path.iter().copied().collect();
    let (lo, klo) = path[0];
    let (hi, khi) = path[path.len() - 1];
    for d in 1..=margin as i64 {
        kj.insert(lo - d, klo - d % 2);
        kj.insert(hi + d, khi - d % 2);
    }
    Ok(kj)
}

/// Roof k_{i,j} = k_j + i − 1 over the extended path.
pub fn steepest_surface(path: &BoundaryPath, margin: u32) -> Result<SteppedSurface, EngineError> {
    let kj = extend(&path.vertices, margin)?;
    let depth = (path.vertices.len() as i64 - 1) / 2 + 2;
    let mut heights = BTreeMap::new();
    for (&j, &k) in &kj {
        for i in 1..=depth {
            heights.insert((i, j), k + i - 1);
        }
    }
    Ok(SteppedSurface { heights })
}

/// Walls k_{i,j} = k_j + ((i − 1) mod 2) over the walls-frame border path.
pub fn vertical_wall_surface(lam: &Partition, margin: u32) -> Result<SteppedSurface, EngineError> {
    let path = BoundaryPath::in_frame(lam, Frame::Walls)?;
    let kj = extend(&path.vertices, margin)?;
    let depth = lam.extended().pyramid_layers().len() as i64 + 2;
    let mut heights = BTreeMap::new();
    for (&j, &k) in &kj {
        for i in 1..=depth {
            heights.insert((i, j), k + (i - 1) % 2);
        }
    }
    Ok(SteppedSurface { heights })
}

/// Values attached to the surface vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InitialData {
    values: BTreeMap<(i64, i64), LaurentPoly>,
}

impl InitialData {
    pub fn from_values(values: BTreeMap<(i64, i64), LaurentPoly>) -> Self {
        InitialData { values }
    }

    /// Value at (i, j); plane 0 is identically 1.
    pub fn value(&self, i: i64, j: i64) -> Option<LaurentPoly> {
        if i == 0 {
            return Some(LaurentPoly::one());
        }
        self.values.get(&(i, j)).cloned()
    }

    pub fn get(&self, i: i64, j: i64) -> Option<&LaurentPoly> {
        self.values.get(&(i, j))
    }

    pub fn values(&self) -> &BTreeMap<(i64, i64), LaurentPoly> {
        &self.values
    }

    pub fn mirrored(&self) -> InitialData {
        InitialData {
            values: self
                .values
                .iter()
                .map(|(&(i, j), v)| ((i, -j), v.clone()))
                .collect(),
        }
    }

    pub fn matches(&self, s: &SteppedSurface) -> bool {
        self.values.len() == s.heights.len()
            && self.values.keys().all(|p| s.heights.contains_key(p))
    }
}

/// Places θ_{a,b} at the apex vertex over its maximal square; other vertices get `aux[n]`.
pub fn assign_theta(
    lam: &Partition,
    surface: &SteppedSurface,
    table: &mut VarTable,
) -> Result<(InitialData, BTreeMap<Cell, VarId>), EngineError> {
    let star = lam.extended();
    let mut values = BTreeMap::new();
    let mut thetas = BTreeMap::new();
    for c in star.cells() {
        let n = star.square_at(c.a, c.b)?.size;
        let p = Frame::Steepest.apex(lam, c, n);
        if surface.height(p.i, p.j) != Some(p.k) {
            return Err(EngineError::SurfaceMismatch);
        }
        let v = table.intern(&format!("theta[{},{}]", c.a, c.b));
        if values.insert((p.i, p.j), LaurentPoly::var(v)).is_some() {
            return Err(EngineError::SurfaceMismatch);
        }
        thetas.insert(c, v);
    }
    let mut n = 0;
    for &(i, j) in surface.heights.keys() {
        if !values.contains_key(&(i, j)) {
            n += 1;
            let v = table.intern(&format!("aux[{}]", n));
            values.insert((i, j), LaurentPoly::var(v));
        }
    }
    Ok((InitialData { values }, thetas))
}

/// Fresh `t[i,j]` at every surface vertex.
pub fn plain_data(surface: &SteppedSurface, table: &mut VarTable) -> InitialData {
    let values = surface
        .heights
        .keys()
        .map(|&(i, j)| {
            (
                (i, j),
                LaurentPoly::var(table.intern(&format!("t[{},{}]", i, j))),
            )
        })
        .collect();
    InitialData { values }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Parity { i: i64, j: i64, k: i64 },
    Step { from: (i64, i64), to: (i64, i64) },
}

/// Every parity or unit-step violation.
pub fn validate_surface(s: &SteppedSurface) -> Vec<Violation> {
    let mut out = Vec::new();
    for (&(i, j), &k) in &s.heights {
        if (i + j + k).rem_euclid(2) != 1 {
            out.push(Violation::Parity { i, j, k });
        }
        for (di, dj) in [(0, 1), (1, 0)] {
            if let Some(k2) = s.height(i + di, j + dj) {
                if (k2 - k).abs() != 1 {
                    out.push(Violation::Step {
                        from: (i, j),
                        to: (i + di, j + dj),
                    });
                }
            }
        }
    }
    out
}

/// Lines "i j k name".
pub fn dump(
    s: &SteppedSurface,
    data: &InitialData,
    table: &VarTable,
) -> Result<String, EngineError> {
    let mut out = String::new();
    for (&(i, j), &k) in &s.heights {
        let name = match data.get(i, j) {
            Some(v) => v.render(table)?,
            None => String::from("?"),
        };
        out.push_str(&format!("{} {} {} {}\n", i, j, k, name));
    }
    Ok(out)
}

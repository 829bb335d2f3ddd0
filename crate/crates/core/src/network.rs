//! U/V chip transfer matrices, path networks and non-intersecting paths.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::det::determinant;
use crate::diagrams::{Cell, FccPoint, Frame, Partition};
use crate::error::{DiagramError, EngineError};
use crate::laurent::{LaurentPoly, VarTable};
use crate::octahedron::{SteepestSystem, WallSystem, DEFAULT_MARGIN};
use crate::surfaces::{InitialData, SteppedSurface};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceKind {
    Steepest,
    Walls,
}

/// Projection indices of a point, and of its Wronskian base for m > 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projections {
    pub j0: i64,
    pub j1: i64,
    /// ℓ₁ < … < ℓ_m
    pub left: Vec<i64>,
    /// r₁ > … > r_m
    pub right: Vec<i64>,
}

fn project(surface: &SteppedSurface, j: i64, k: i64) -> Result<(i64, i64), EngineError> {
    let trace = surface.trace();
    let out = || EngineError::OutsideDomain(FccPoint { i: 1, j, k });
    let j0 = trace
        .iter()
        .rev()
        .find(|&&(l, kl)| l <= j && j - l == k - kl)
        .ok_or_else(out)?
        .0;
    let j1 = trace
        .iter()
        .find(|&&(l, kl)| l >= j && l - j == k - kl)
        .ok_or_else(out)?
        .0;
    Ok((j0, j1))
}

/// Base point (α, β) of the Wronskian below the apex (m, j, k).
fn base_point(m: i64, j: i64, k: i64, al: i64, be: i64) -> (i64, i64) {
    (j + be - al, k + m + 1 - al - be)
}

/// Projections of the apex (m, j, k); m = 1 is the point (1, j, k) itself.
pub fn projections(
    surface: &SteppedSurface,
    j: i64,
    k: i64,
    m: u32,
) -> Result<Projections, EngineError> {
    let m = m as i64;
    let mut left = Vec::new();
    let mut right = Vec::new();
    for idx in 1..=m {
        let (jb, kb) = base_point(m, j, k, 1, idx);
        left.push(project(surface, jb, kb)?.0);
        let (ja, ka) = base_point(m, j, k, idx, 1);
        right.push(project(surface, ja, ka)?.1);
    }
    let (j0, j1) = (left[0], right[0]);
    Ok(Projections {
        j0,
        j1,
        left,
        right,
    })
}

/// Exact ratios used to compare chip products with generic arguments.
#[derive(Clone, Debug)]
struct Ratio {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Ratio {
    fn new(num: &LaurentPoly, den: &LaurentPoly) -> Self {
        Ratio {
            num: num.clone(),
            den: den.clone(),
        }
    }
    fn int(c: i64) -> Self {
        Ratio {
            num: LaurentPoly::constant(c),
            den: LaurentPoly::one(),
        }
    }
    fn add(&self, o: &Ratio) -> Ratio {
        Ratio {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
    }
    fn mul(&self, o: &Ratio) -> Ratio {
        Ratio {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
    }
    fn same(&self, o: &Ratio) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

type RatioMatrix = [[Ratio; 2]; 2];

fn rmul(x: &RatioMatrix, y: &RatioMatrix) -> RatioMatrix {
    let e = |r: usize, c: usize| x[r][0].mul(&y[0][c]).add(&x[r][1].mul(&y[1][c]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn u_ratio(a: &Ratio, b: &Ratio, c: &Ratio) -> RatioMatrix {
    let div = |x: &Ratio| Ratio {
        num: &x.num * &b.den,
        den: &x.den * &b.num,
    };
    [[Ratio::int(1), Ratio::int(0)], [div(c), div(a)]]
}

fn v_ratio(c: &Ratio, a: &Ratio, b: &Ratio) -> RatioMatrix {
    let div = |x: &Ratio| Ratio {
        num: &x.num * &b.den,
        den: &x.den * &b.num,
    };
    [[div(a), div(c)], [Ratio::int(0), Ratio::int(1)]]
}

/// V(u,a,b)·U(b,c,v) = U(a,x,v)·V(u,x,c), with x = x_num / x_den.
pub fn flatness_holds(
    u: &LaurentPoly,
    a: &LaurentPoly,
    b: &LaurentPoly,
    c: &LaurentPoly,
    v: &LaurentPoly,
    x_num: &LaurentPoly,
    x_den: &LaurentPoly,
) -> bool {
    let one = LaurentPoly::one();
    let r = |p: &LaurentPoly| Ratio::new(p, &one);
    let x = Ratio::new(x_num, x_den);
    if x.den.is_zero() || [b, c].iter().any(|p| p.is_zero()) || x.num.is_zero() {
        return false;
    }
    let lhs = rmul(&v_ratio(&r(u), &r(a), &r(b)), &u_ratio(&r(b), &r(c), &r(v)));
    let rhs = rmul(&u_ratio(&r(a), &x, &r(v)), &v_ratio(&r(u), &x, &r(c)));
    (0..2).all(|i| (0..2).all(|j| lhs[i][j].same(&rhs[i][j])))
}

/// 2×2 chip matrix with Laurent entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChipMatrix(pub [[LaurentPoly; 2]; 2]);

impl ChipMatrix {
    /// [[1,0],[c/b, a/b]]
    pub fn u(a: &LaurentPoly, b: &LaurentPoly, c: &LaurentPoly) -> Result<Self, EngineError> {
        Ok(ChipMatrix([
            [LaurentPoly::one(), LaurentPoly::zero()],
            [c.exact_div(b)?, a.exact_div(b)?],
        ]))
    }

    /// [[a/b, c/b],[0,1]]
    pub fn v(c: &LaurentPoly, a: &LaurentPoly, b: &LaurentPoly) -> Result<Self, EngineError> {
        Ok(ChipMatrix([
            [a.exact_div(b)?, c.exact_div(b)?],
            [LaurentPoly::zero(), LaurentPoly::one()],
        ]))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChipKind {
    U,
    V,
}

/// Surface vertex (plane, column); plane 0 stands for the constant 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Vertex {
    pub i: i64,
    pub j: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chip {
    pub kind: ChipKind,
    /// Acts on levels `position` and `position + 1`.
    pub position: u32,
    pub strip: i64,
    pub left: Vertex,
    pub right: Vertex,
    pub third: Vertex,
}

/// Resolution of the two lozenge splittings of a tetrahedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Diagonal {
    #[default]
    AD,
    BC,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LozengeDecomposition {
    pub j0: i64,
    pub j1: i64,
    pub chips: Vec<Chip>,
    /// Index of the first chip of each strip, plus `j1` mapped to the chip count.
    pub strip_starts: BTreeMap<i64, usize>,
}

fn strip_chips(s: &SteppedSurface, jj: i64, choice: Diagonal) -> Result<Vec<Chip>, EngineError> {
    let depth = s.depth();
    let k = |i: i64, j: i64| s.height(i, j);
    let bad = || EngineError::NotDecomposable(jj);
    let mut chips: Vec<Chip> = Vec::new();
    for p in 1..depth {
        let h = k(p, jj).ok_or_else(bad)?;
        let sgn = k(p, jj + 1).ok_or_else(bad)? - h;
        let kind = if sgn > 0 { ChipKind::U } else { ChipKind::V };
        let pp = if kind == ChipKind::V { p - 1 } else { p + 1 };
        let third = if pp == 0 {
            Vertex { i: 0, j: jj }
        } else if k(pp, jj) == Some(h + sgn) {
            Vertex { i: pp, j: jj }
        } else if k(pp, jj + 1) == Some(h) {
            Vertex { i: pp, j: jj + 1 }
        } else {
            return Err(bad());
        };
        chips.push(Chip {
            kind,
            position: p as u32,
            strip: jj,
            left: Vertex { i: p, j: jj },
            right: Vertex { i: p, j: jj + 1 },
            third,
        });
    }
    // before[p] is true when chip p precedes chip p+1
    let mut before = vec![true; chips.len().saturating_sub(1)];
    for idx in 0..before.len() {
        let p = idx as i64 + 1;
        let (x, y) = (chips[idx].kind, chips[idx + 1].kind);
        match (x, y) {
            (ChipKind::U, ChipKind::V) => {
                let ad = choice == Diagonal::AD;
                chips[idx].third = Vertex {
                    i: p + 1,
                    j: if ad { jj + 1 } else { jj },
                };
                chips[idx + 1].third = Vertex {
                    i: p,
                    j: if ad { jj } else { jj + 1 },
                };
                before[idx] = !ad;
            }
            (ChipKind::V, ChipKind::U) => {}
            _ => {
                let sgn = k(p, jj + 1).ok_or_else(bad)? - k(p, jj).ok_or_else(bad)?;
                let e = k(p + 1, jj).ok_or_else(bad)? - k(p, jj).ok_or_else(bad)?;
                before[idx] = e == sgn;
            }
        }
    }
    // topological order of the path-shaped precedence graph, smallest index first
    let n = chips.len();
    let mut indeg = vec![0usize; n];
    for (idx, &b) in before.iter().enumerate() {
        if b {
            indeg[idx + 1] += 1;
        } else {
            indeg[idx] += 1;
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&x) = ready.iter().next() {
        ready.remove(&x);
        order.push(chips[x]);
        let mut release = |y: usize| {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                ready.insert(y);
            }
        };
        if x + 1 < n && before[x] {
            release(x + 1);
        }
        if x > 0 && !before[x - 1] {
            release(x - 1);
        }
    }
    Ok(order)
}

/// Every chip between columns j0 and j1, before pruning.
pub fn full_decomposition(
    s: &SteppedSurface,
    j0: i64,
    j1: i64,
    choice: Diagonal,
) -> Result<LozengeDecomposition, EngineError> {
    let mut chips = Vec::new();
    let mut strip_starts = BTreeMap::new();
    for jj in j0..j1 {
        strip_starts.insert(jj, chips.len());
        chips.extend(strip_chips(s, jj, choice)?);
    }
    strip_starts.insert(j1, chips.len());
    Ok(LozengeDecomposition {
        j0,
        j1,
        chips,
        strip_starts,
    })
}

/// Level transitions of a chip other than the weight-one diagonal entry.
fn moves(c: &Chip) -> [(u32, u32); 2] {
    let p = c.position;
    match c.kind {
        ChipKind::U => [(p + 1, p), (p + 1, p + 1)],
        ChipKind::V => [(p, p), (p, p + 1)],
    }
}

fn step_forward(c: &Chip, from: &BTreeSet<u32>) -> BTreeSet<u32> {
    let p = c.position;
    let mut out = BTreeSet::new();
    for &r in from {
        match (c.kind, r) {
            (ChipKind::U, x) if x == p + 1 => {
                out.insert(p);
                out.insert(p + 1);
            }
            (ChipKind::V, x) if x == p => {
                out.insert(p);
                out.insert(p + 1);
            }
            _ => {
                out.insert(r);
            }
        }
    }
    out
}

fn step_backward(c: &Chip, to: &BTreeSet<u32>) -> BTreeSet<u32> {
    let p = c.position;
    let mut out = BTreeSet::new();
    for &r in to {
        match c.kind {
            ChipKind::U if r == p => {
                out.insert(p);
                out.insert(p + 1);
            }
            ChipKind::U if r == p + 1 => {
                out.insert(p + 1);
            }
            ChipKind::V if r == p + 1 => {
                out.insert(p);
                out.insert(p + 1);
            }
            ChipKind::V if r == p => {
                out.insert(p);
            }
            _ => {
                out.insert(r);
            }
        }
    }
    out
}

impl LozengeDecomposition {
    fn layer(&self, j: i64) -> usize {
        self.strip_starts[&j]
    }

    /// Drops chips that no level-1 path between the given columns uses non-trivially.
    pub fn pruned(&self, sources: &[i64], sinks: &[i64]) -> LozengeDecomposition {
        let n = self.chips.len();
        let src: BTreeSet<usize> = sources.iter().map(|&j| self.layer(j)).collect();
        let snk: BTreeSet<usize> = sinks.iter().map(|&j| self.layer(j)).collect();
        let mut fwd = vec![BTreeSet::new(); n + 1];
        for x in 0..=n {
            let mut cur = if x == 0 {
                BTreeSet::new()
            } else {
                step_forward(&self.chips[x - 1], &fwd[x - 1])
            };
            if src.contains(&x) {
                cur.insert(1);
            }
            fwd[x] = cur;
        }
        let mut bwd = vec![BTreeSet::new(); n + 1];
        for x in (0..=n).rev() {
            let mut cur = if x == n {
                BTreeSet::new()
            } else {
                step_backward(&self.chips[x], &bwd[x + 1])
            };
            if snk.contains(&x) {
                cur.insert(1);
            }
            bwd[x] = cur;
        }
        let keep: Vec<bool> = (0..n)
            .map(|x| {
                moves(&self.chips[x])
                    .iter()
                    .any(|(r, c)| fwd[x].contains(r) && bwd[x + 1].contains(c))
            })
            .collect();
        let mut chips = Vec::new();
        let mut strip_starts = BTreeMap::new();
        let mut next_strip = self.strip_starts.iter().peekable();
        for x in 0..=n {
            while let Some((&j, _)) = next_strip.next_if(|(_, &st)| st == x) {
                strip_starts.insert(j, chips.len());
            }
            if x < n && keep[x] {
                chips.push(self.chips[x]);
            }
        }
        LozengeDecomposition {
            j0: self.j0,
            j1: self.j1,
            chips,
            strip_starts,
        }
    }

    pub fn levels(&self) -> u32 {
        self.chips.iter().map(|c| c.position + 1).max().unwrap_or(1)
    }

    /// M(j0, j1)_{1,1} by a row-vector sweep.
    pub fn m11(&self, data: &InitialData) -> Result<LaurentPoly, EngineError> {
        self.m11_between(data, self.j0, self.j1)
    }

    pub fn m11_between(
        &self,
        data: &InitialData,
        from: i64,
        to: i64,
    ) -> Result<LaurentPoly, EngineError> {
        let levels = self.levels() as usize;
        let mut v = vec![LaurentPoly::zero(); levels + 2];
        v[1] = LaurentPoly::one();
        for c in &self.chips[self.layer(from)..self.layer(to)] {
            let m = chip_matrix(c, data)?;
            let p = c.position as usize;
            let (a, b) = (v[p].clone(), v[p + 1].clone());
            v[p] = &(&a * &m.0[0][0]) + &(&b * &m.0[1][0]);
            v[p + 1] = &(&a * &m.0[0][1]) + &(&b * &m.0[1][1]);
        }
        Ok(v[1].clone())
    }
}

fn value(data: &InitialData, x: Vertex) -> Result<LaurentPoly, EngineError> {
    data.value(x.i, x.j)
        .ok_or(EngineError::NotDecomposable(x.j))
}

pub fn chip_matrix(c: &Chip, data: &InitialData) -> Result<ChipMatrix, EngineError> {
    let l = value(data, c.left)?;
    let r = value(data, c.right)?;
    let t = value(data, c.third)?;
    match c.kind {
        ChipKind::U => ChipMatrix::u(&l, &r, &t),
        ChipKind::V => ChipMatrix::v(&t, &l, &r),
    }
}

/// Minimal decomposition of the slice [j0, j1] for the level-1 entry.
pub fn lozenge_decomposition(
    s: &SteppedSurface,
    j0: i64,
    j1: i64,
    choice: Diagonal,
) -> Result<LozengeDecomposition, EngineError> {
    Ok(full_decomposition(s, j0, j1, choice)?.pruned(&[j0], &[j1]))
}

/// T_{1,j,k} = M(j0,j1)_{1,1} · t_{1,j1}.
pub fn transfer_value(
    s: &SteppedSurface,
    data: &InitialData,
    j: i64,
    k: i64,
) -> Result<LaurentPoly, EngineError> {
    transfer_value_with(s, data, j, k, Diagonal::AD)
}

pub fn transfer_value_with(
    s: &SteppedSurface,
    data: &InitialData,
    j: i64,
    k: i64,
    choice: Diagonal,
) -> Result<LaurentPoly, EngineError> {
    let (j0, j1) = project(s, j, k)?;
    let m = lozenge_decomposition(s, j0, j1, choice)?.m11(data)?;
    Ok(&m * &value(data, Vertex { i: 1, j: j1 })?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NetVertex {
    pub layer: usize,
    pub level: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetEdge {
    pub from: usize,
    pub to: usize,
    pub weight: LaurentPoly,
}

/// Layered weighted DAG built from a chip sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    pub vertices: Vec<NetVertex>,
    pub edges: Vec<NetEdge>,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    /// Multiplier turning the single-pair partition function into the target value.
    pub boundary_factor: LaurentPoly,
    /// Initial data of the slice, keyed by (plane, column).
    pub faces: BTreeMap<(i64, i64), LaurentPoly>,
    out: Vec<Vec<usize>>,
}

impl Network {
    /// Sources and sinks are level-1 vertices at the given strip boundaries.
    pub fn from_decomposition(
        d: &LozengeDecomposition,
        data: &InitialData,
        sources: &[i64],
        sinks: &[i64],
        boundary_factor: LaurentPoly,
    ) -> Result<Network, EngineError> {
        let levels = d.levels();
        let layers = d.chips.len() + 1;
        let id = |layer: usize, level: u32| layer * levels as usize + (level as usize - 1);
        let mut edges_all: Vec<NetEdge> = Vec::new();
        for (x, c) in d.chips.iter().enumerate() {
            let m = chip_matrix(c, data)?;
            let p = c.position;
            for lvl in 1..=levels {
                if lvl != p && lvl != p + 1 {
                    edges_all.push(NetEdge {
                        from: id(x, lvl),
                        to: id(x + 1, lvl),
                        weight: LaurentPoly::one(),
                    });
                }
            }
            for (r, rl) in [(0usize, p), (1, p + 1)] {
                for (cc, cl) in [(0usize, p), (1, p + 1)] {
                    if !m.0[r][cc].is_zero() {
                        edges_all.push(NetEdge {
                            from: id(x, rl),
                            to: id(x + 1, cl),
                            weight: m.0[r][cc].clone(),
                        });
                    }
                }
            }
        }
        let n_all = layers * levels as usize;
        let src_all: Vec<usize> = sources.iter().map(|&j| id(d.layer(j), 1)).collect();
        let snk_all: Vec<usize> = sinks.iter().map(|&j| id(d.layer(j), 1)).collect();
        // keep only vertices on some source-to-sink path
        let mut fwd = vec![false; n_all];
        let mut bwd = vec![false; n_all];
        for &s in &src_all {
            fwd[s] = true;
        }
        for &t in &snk_all {
            bwd[t] = true;
        }
        for e in &edges_all {
            if fwd[e.from] {
                fwd[e.to] = true;
            }
        }
        for e in edges_all.iter().rev() {
            if bwd[e.to] {
                bwd[e.from] = true;
            }
        }
        let mut remap = vec![usize::MAX; n_all];
        let mut vertices = Vec::new();
        for layer in 0..layers {
            for level in 1..=levels {
                let v = id(layer, level);
                if fwd[v] && bwd[v] {
                    remap[v] = vertices.len();
                    vertices.push(NetVertex { layer, level });
                }
            }
        }
        let edges: Vec<NetEdge> = edges_all
            .into_iter()
            .filter(|e| remap[e.from] != usize::MAX && remap[e.to] != usize::MAX)
            .map(|e| NetEdge {
                from: remap[e.from],
                to: remap[e.to],
                weight: e.weight,
            })
            .collect();
        let mut out = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            out[e.from].push(i);
        }
        let lookup = |v: usize| remap[v];
        let faces = data
            .values()
            .iter()
            .filter(|(&(_, j), _)| j >= d.j0 && j <= d.j1)
            .map(|(&p, v)| (p, v.clone()))
            .collect();
        Ok(Network {
            sources: src_all.into_iter().map(lookup).collect(),
            sinks: snk_all.into_iter().map(lookup).collect(),
            vertices,
            edges,
            boundary_factor,
            faces,
            out,
        })
    }

    pub fn source(&self) -> usize {
        self.sources[0]
    }

    pub fn sink(&self) -> usize {
        self.sinks[0]
    }

    /// Sum of path weights from `s` to `t`, in topological order.
    pub fn partition_function(&self, s: usize, t: usize) -> LaurentPoly {
        if s == usize::MAX || t == usize::MAX {
            return LaurentPoly::zero();
        }
        let mut acc = vec![LaurentPoly::zero(); self.vertices.len()];
        acc[s] = LaurentPoly::one();
        // vertices are stored in layer order, edges go to the next layer
        for v in 0..self.vertices.len() {
            if acc[v].is_zero() {
                continue;
            }
            let here = acc[v].clone();
            for &e in &self.out[v] {
                let edge = &self.edges[e];
                acc[edge.to] = &acc[edge.to] + &(&here * &edge.weight);
            }
        }
        acc[t].clone()
    }

    /// All paths from `s` to `t` as edge-index lists, depth first.
    pub fn paths(&self, s: usize, t: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if s == usize::MAX || t == usize::MAX {
            return out;
        }
        let mut cur = Vec::new();
        self.walk(s, t, &mut cur, &mut out);
        out
    }

    fn walk(&self, v: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if v == t {
            out.push(cur.clone());
            return;
        }
        for &e in &self.out[v] {
            cur.push(e);
            self.walk(self.edges[e].to, t, cur, out);
            cur.pop();
        }
    }

    pub fn path_weight(&self, path: &[usize]) -> LaurentPoly {
        path.iter()
            .fold(LaurentPoly::one(), |acc, &e| &acc * &self.edges[e].weight)
    }

    fn path_vertices(&self, s: usize, path: &[usize]) -> Vec<usize> {
        let mut v = vec![s];
        v.extend(path.iter().map(|&e| self.edges[e].to));
        v
    }

    /// Sum over vertex-disjoint families pairing sources[β] with sinks[β].
    pub fn nonintersecting_sum(&self) -> LaurentPoly {
        let all: Vec<Vec<Vec<usize>>> = self
            .sources
            .iter()
            .zip(&self.sinks)
            .map(|(&s, &t)| self.paths(s, t))
            .collect();
        let mut used = BTreeSet::new();
        let mut total = LaurentPoly::zero();
        self.families(&all, 0, &mut used, LaurentPoly::one(), &mut total);
        total
    }

    fn families(
        &self,
        all: &[Vec<Vec<usize>>],
        at: usize,
        used: &mut BTreeSet<usize>,
        w: LaurentPoly,
        total: &mut LaurentPoly,
    ) {
        if at == all.len() {
            *total = &*total + &w;
            return;
        }
        for path in &all[at] {
            let vs = self.path_vertices(self.sources[at], path);
            if vs.iter().any(|v| used.contains(v)) {
                continue;
            }
            for &v in &vs {
                used.insert(v);
            }
            self.families(all, at + 1, used, &w * &self.path_weight(path), total);
            for v in &vs {
                used.remove(v);
            }
        }
    }

    /// Vertex list then edge list with weights.
    pub fn dump(&self, table: &VarTable) -> Result<String, EngineError> {
        let mut s = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let role = if self.sources.contains(&i) {
                " source"
            } else if self.sinks.contains(&i) {
                " sink"
            } else {
                ""
            };
            s.push_str(&format!(
                "v {} layer={} level={}{}\n",
                i, v.layer, v.level, role
            ));
        }
        for e in &self.edges {
            s.push_str(&format!(
                "e {} {} {}\n",
                e.from,
                e.to,
                e.weight.render(table)?
            ));
        }
        Ok(s)
    }
}

/// Steepest data seen in the mirrored frame j → −j.
struct MirroredSteepest {
    surface: SteppedSurface,
    data: InitialData,
}

impl MirroredSteepest {
    fn of(sys: &SteepestSystem) -> Self {
        MirroredSteepest {
            surface: sys.solver.surface().mirrored(),
            data: sys.solver.data().mirrored(),
        }
    }
}

fn single_network(
    s: &SteppedSurface,
    data: &InitialData,
    j: i64,
    k: i64,
) -> Result<Network, EngineError> {
    let (j0, j1) = project(s, j, k)?;
    let d = lozenge_decomposition(s, j0, j1, Diagonal::AD)?;
    let factor = value(data, Vertex { i: 1, j: j1 })?;
    Network::from_decomposition(&d, data, &[j0], &[j1], factor)
}

impl SteepestSystem {
    /// N_{a,b}: paths run from the column of θ_{a,λ_a+1} to the column of (a,b)'s right projection.
    pub fn network(&self, a: u32, b: u32) -> Result<Network, EngineError> {
        let c = Cell::new(a, b);
        if !self.lam.contains(c) {
            return Err(DiagramError::BoxOutside(c).into());
        }
        let pt = self.point(c);
        let m = MirroredSteepest::of(self);
        single_network(&m.surface, &m.data, -pt.j, pt.k)
    }

    pub fn path_value(&self, a: u32, b: u32) -> Result<LaurentPoly, EngineError> {
        let n = self.network(a, b)?;
        Ok(&n.partition_function(n.source(), n.sink()) * &n.boundary_factor)
    }

    pub fn transfer(&self, a: u32, b: u32, choice: Diagonal) -> Result<LaurentPoly, EngineError> {
        let pt = self.point(Cell::new(a, b));
        transfer_value_with(
            self.solver.surface(),
            self.solver.data(),
            pt.j,
            pt.k,
            choice,
        )
    }

    /// Non-intersecting path network below the apex over the m×m square at (a,b).
    pub fn lgv_network(&self, a: u32, b: u32, m: u32) -> Result<Network, EngineError> {
        if !self.star.fits_square(a, b, m) {
            return Err(EngineError::SquareDoesNotFit { a, b, m });
        }
        let apex = Frame::Steepest.apex(&self.lam, Cell::new(a, b), m);
        let mir = MirroredSteepest::of(self);
        lgv_network(&mir.surface, &mir.data, -apex.j, apex.k, m)
    }
}

impl WallSystem {
    pub fn network(&self, a: u32, b: u32) -> Result<Network, EngineError> {
        let c = Cell::new(a, b);
        if !self.lam.contains(c) {
            return Err(DiagramError::BoxOutside(c).into());
        }
        let pt = self.point(c);
        single_network(self.solver.surface(), self.solver.data(), pt.j, pt.k)
    }

    pub fn lgv_network(&self, a: u32, b: u32, m: u32) -> Result<Network, EngineError> {
        if !self.lam.fits_square(a, b, m) {
            return Err(EngineError::SquareDoesNotFit { a, b, m });
        }
        let apex = Frame::Walls.apex(&self.lam, Cell::new(a, b), m);
        lgv_network(self.solver.surface(), self.solver.data(), apex.j, apex.k, m)
    }
}

/// Network over [ℓ₁, r₁] with sources ℓ_β and sinks r_β; the factor is Π t_{1,r_β}.
pub fn lgv_network(
    s: &SteppedSurface,
    data: &InitialData,
    j: i64,
    k: i64,
    m: u32,
) -> Result<Network, EngineError> {
    let pr = projections(s, j, k, m)?;
    let d = full_decomposition(s, pr.j0, pr.j1, Diagonal::AD)?.pruned(&pr.left, &pr.right);
    let mut factor = LaurentPoly::one();
    for &r in &pr.right {
        factor = &factor * &value(data, Vertex { i: 1, j: r })?;
    }
    Network::from_decomposition(&d, data, &pr.left, &pr.right, factor)
}

/// det[Z(ℓ_β → r_α)] times the boundary factor.
pub fn lgv_value(n: &Network) -> Result<LaurentPoly, EngineError> {
    let m = n.sources.len();
    let rows: Vec<Vec<LaurentPoly>> = (0..m)
        .map(|al| {
            (0..m)
                .map(|be| n.partition_function(n.sources[be], n.sinks[al]))
                .collect()
        })
        .collect();
    Ok(&determinant(&rows)? * &n.boundary_factor)
}

pub fn build_steepest_network(
    lam: &Partition,
    a: u32,
    b: u32,
) -> Result<(VarTable, Network), EngineError> {
    let sys = SteepestSystem::new(lam, DEFAULT_MARGIN)?;
    let n = sys.network(a, b)?;
    Ok((sys.table, n))
}

pub fn path_partition_function(
    lam: &Partition,
    a: u32,
    b: u32,
) -> Result<LaurentPoly, EngineError> {
    SteepestSystem::new(lam, DEFAULT_MARGIN)?.path_value(a, b)
}

pub fn build_vertical_network(
    lam: &Partition,
    a: u32,
    b: u32,
) -> Result<(VarTable, Network), EngineError> {
    let sys = WallSystem::new(lam, DEFAULT_MARGIN)?;
    let n = sys.network(a, b)?;
    Ok((sys.table, n))
}

pub fn lgv_partition_function(
    lam: &Partition,
    a: u32,
    b: u32,
    m: u32,
    kind: SurfaceKind,
) -> Result<LaurentPoly, EngineError> {
    let n = match kind {
        SurfaceKind::Steepest => SteepestSystem::new(lam, DEFAULT_MARGIN)?.lgv_network(a, b, m)?,
        SurfaceKind::Walls => WallSystem::new(lam, DEFAULT_MARGIN)?.lgv_network(a, b, m)?,
    };
    lgv_value(&n)
}

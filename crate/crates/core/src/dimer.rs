//! Face-weighted perfect matchings on the honeycomb graph of a sub-diagram.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::diagrams::{Cell, Partition};
use crate::error::{DiagramError, EngineError};
use crate::laurent::{LaurentPoly, VarTable};
use crate::octahedron::{SteepestSystem, DEFAULT_MARGIN};

pub type FacePos = (i64, i64);

/// Vertex: a triangle of three mutually adjacent face positions, sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Triangle(pub [FacePos; 3]);

impl Triangle {
    fn new(mut t: [FacePos; 3]) -> Self {
        t.sort();
        Triangle(t)
    }

    /// Colour class: {(r,s),(r+1,s),(r+1,s+1)} versus {(r,s),(r,s+1),(r+1,s+1)}.
    pub fn is_lower(&self) -> bool {
        let [p, q, _] = self.0;
        q.0 == p.0 + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimerEdge {
    pub u: usize,
    pub v: usize,
    /// The two faces separated by the edge.
    pub faces: [FacePos; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub pos: FacePos,
    pub inner: bool,
    /// Number of graph vertices around an inner face; adjacent edge count for an outer one.
    pub degree: usize,
    pub value: LaurentPoly,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimerGraph {
    pub vertices: Vec<Triangle>,
    pub edges: Vec<DimerEdge>,
    pub faces: Vec<Face>,
}

impl DimerGraph {
    pub fn inner_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| f.inner)
    }

    pub fn outer_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| !f.inner)
    }

    pub fn is_bipartite(&self) -> bool {
        self.edges
            .iter()
            .all(|e| self.vertices[e.u].is_lower() != self.vertices[e.v].is_lower())
    }

    /// Π inner a^{v/2−1−D} · Π outer b^{1−D}.
    pub fn weight(&self, matching: &[usize]) -> LaurentPoly {
        let mut d: BTreeMap<FacePos, i32> = BTreeMap::new();
        for &e in matching {
            for f in self.edges[e].faces {
                *d.entry(f).or_insert(0) += 1;
            }
        }
        let mut w = LaurentPoly::one();
        for f in &self.faces {
            let dd = d.get(&f.pos).copied().unwrap_or(0);
            let e = if f.inner {
                f.degree as i32 / 2 - 1 - dd
            } else {
                1 - dd
            };
            w = &w * &pow_signed(&f.value, e);
        }
        w
    }

    pub fn partition_function(&self) -> LaurentPoly {
        enumerate_matchings(self)
            .iter()
            .fold(LaurentPoly::zero(), |acc, m| &acc + &self.weight(m))
    }

    pub fn dump(&self, table: &VarTable) -> Result<String, EngineError> {
        let mut s = String::new();
        for f in &self.faces {
            s.push_str(&format!(
                "face {} {} {} deg={} {}\n",
                f.pos.0,
                f.pos.1,
                if f.inner { "inner" } else { "outer" },
                f.degree,
                f.value.render(table)?
            ));
        }
        for (i, e) in self.edges.iter().enumerate() {
            s.push_str(&format!(
                "edge {} {} {} faces ({},{}) ({},{})\n",
                i, e.u, e.v, e.faces[0].0, e.faces[0].1, e.faces[1].0, e.faces[1].1
            ));
        }
        Ok(s)
    }
}

fn pow_signed(p: &LaurentPoly, e: i32) -> LaurentPoly {
    if e >= 0 {
        p.pow(e as u32)
    } else {
        p.try_inverse()
            .expect("face values are monomials")
            .pow((-e) as u32)
    }
}

/// Builds 𝒢 for λ_{a,b}; `face_value` maps a face position to θ at (r+1, s+1).
pub fn build_graph<F>(
    lam: &Partition,
    a: u32,
    b: u32,
    mut face_value: F,
) -> Result<DimerGraph, EngineError>
where
    F: FnMut(Cell) -> Option<LaurentPoly>,
{
    let c = Cell::new(a, b);
    if !lam.contains(c) {
        return Err(DiagramError::BoxOutside(c).into());
    }
    let sub = lam.se_region(a, b);
    let inner: BTreeSet<FacePos> = sub
        .cells()
        .map(|x| ((x.a + a - 1) as i64, (x.b + b - 1) as i64))
        .collect();
    let ext: BTreeSet<FacePos> = sub
        .extended()
        .cells()
        .map(|x| ((x.a + a - 1) as i64, (x.b + b - 1) as i64))
        .collect();
    let sharp: BTreeSet<FacePos> = ext.iter().map(|&(r, s)| (r - 1, s - 1)).collect();

    let mut tris = BTreeSet::new();
    for &(r, s) in &inner {
        for t in [
            [(r, s), (r + 1, s), (r + 1, s + 1)],
            [(r, s), (r, s + 1), (r + 1, s + 1)],
            [(r - 1, s), (r, s), (r, s + 1)],
            [(r - 1, s - 1), (r, s - 1), (r, s)],
            [(r - 1, s - 1), (r - 1, s), (r, s)],
            [(r, s - 1), (r, s), (r + 1, s)],
        ] {
            tris.insert(Triangle::new(t));
        }
    }
    let vertices: Vec<Triangle> = tris.into_iter().collect();
    let mut edges = Vec::new();
    for x in 0..vertices.len() {
        for y in x + 1..vertices.len() {
            let shared: Vec<FacePos> = vertices[x]
                .0
                .iter()
                .copied()
                .filter(|f| vertices[y].0.contains(f))
                .collect();
            if shared.len() == 2 && shared.iter().any(|f| inner.contains(f)) {
                edges.push(DimerEdge {
                    u: x,
                    v: y,
                    faces: [shared[0], shared[1]],
                });
            }
        }
    }
    let mut by_face: BTreeMap<FacePos, Vec<usize>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        for f in e.faces {
            by_face.entry(f).or_default().push(i);
        }
    }
    let mut faces = Vec::new();
    for (pos, es) in by_face {
        let is_inner = inner.contains(&pos);
        let value = if sharp.contains(&pos) {
            face_value(Cell::new((pos.0 + 1) as u32, (pos.1 + 1) as u32))
                .ok_or(EngineError::InternalMismatch("face variable"))?
        } else if ext.contains(&pos) {
            LaurentPoly::one()
        } else {
            return Err(EngineError::InternalMismatch(
                "face outside the extended diagram",
            ));
        };
        let degree = if is_inner {
            vertices.iter().filter(|t| t.0.contains(&pos)).count()
        } else {
            es.len()
        };
        faces.push(Face {
            pos,
            inner: is_inner,
            degree,
            value,
            edges: es,
        });
    }
    Ok(DimerGraph {
        vertices,
        edges,
        faces,
    })
}

/// All perfect matchings as sorted edge-index lists.
pub fn enumerate_matchings(g: &DimerGraph) -> Vec<Vec<usize>> {
    let pairs: Vec<(usize, usize)> = g.edges.iter().map(|e| (e.u, e.v)).collect();
    perfect_matchings(g.vertices.len(), &pairs)
}

/// Branches on the uncovered vertex with fewest available edges.
pub fn perfect_matchings(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n % 2 == 1 {
        return out;
    }
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        adj[u].push(i);
        adj[v].push(i);
    }
    let mut covered = vec![false; n];
    let mut chosen = Vec::new();
    match_rec(&adj, edges, &mut covered, &mut chosen, &mut out);
    for m in &mut out {
        m.sort();
    }
    out.sort();
    out
}

fn match_rec(
    adj: &[Vec<usize>],
    edges: &[(usize, usize)],
    covered: &mut Vec<bool>,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let free_edges = |v: usize, covered: &[bool]| {
        adj[v]
            .iter()
            .filter(|&&e| !covered[edges[e].0] && !covered[edges[e].1])
            .count()
    };
    let pick = (0..covered.len())
        .filter(|&v| !covered[v])
        .min_by_key(|&v| (free_edges(v, covered), v));
    let v = match pick {
        None => {
            out.push(chosen.clone());
            return;
        }
        Some(v) => v,
    };
    for &e in &adj[v] {
        let (x, y) = edges[e];
        if covered[x] || covered[y] {
            continue;
        }
        covered[x] = true;
        covered[y] = true;
        chosen.push(e);
        match_rec(adj, edges, covered, chosen, out);
        chosen.pop();
        covered[x] = false;
        covered[y] = false;
    }
}

impl SteepestSystem {
    pub fn dimer_graph(&self, a: u32, b: u32) -> Result<DimerGraph, EngineError> {
        build_graph(&self.lam, a, b, |c| self.theta(c))
    }

    pub fn dimer_value(&self, a: u32, b: u32) -> Result<LaurentPoly, EngineError> {
        Ok(self.dimer_graph(a, b)?.partition_function())
    }
}

pub fn build_dimer_graph(
    lam: &Partition,
    a: u32,
    b: u32,
) -> Result<(VarTable, DimerGraph), EngineError> {
    let sys = SteepestSystem::new(lam, DEFAULT_MARGIN)?;
    let g = sys.dimer_graph(a, b)?;
    Ok((sys.table, g))
}

pub fn dimer_partition_function(
    lam: &Partition,
    a: u32,
    b: u32,
) -> Result<LaurentPoly, EngineError> {
    SteepestSystem::new(lam, DEFAULT_MARGIN)?.dimer_value(a, b)
}

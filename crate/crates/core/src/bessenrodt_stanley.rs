//! The x-variable specialization and the direct sub-diagram formulas.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use crate::diagrams::{Cell, Partition};
use crate::error::{DiagramError, EngineError};
use crate::laurent::{LaurentPoly, Monomial, VarId, VarTable};
use crate::octahedron::SteepestSystem;

/// x_{i,j} for the boxes of λ, plus the θ → x substitution.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub lam: Partition,
    pub x: BTreeMap<Cell, VarId>,
    pub map: BTreeMap<VarId, LaurentPoly>,
}

/// Boxes of λ_{a,b} in global coordinates.
fn region(lam: &Partition, a: u32, b: u32) -> Vec<Cell> {
    lam.se_region(a, b)
        .cells()
        .map(|c| Cell::new(c.a + a - 1, c.b + b - 1))
        .collect()
}

impl Restriction {
    pub fn new(lam: &Partition, thetas: &BTreeMap<Cell, VarId>, table: &mut VarTable) -> Self {
        let x: BTreeMap<Cell, VarId> = lam
            .cells()
            .map(|c| (c, table.intern(&format!("x[{},{}]", c.a, c.b))))
            .collect();
        let mut r = Restriction {
            lam: lam.clone(),
            x,
            map: BTreeMap::new(),
        };
        let star = lam.extended();
        for (&c, &v) in thetas {
            let img = if lam.contains(c) {
                let n = star.square_at(c.a, c.b).map(|s| s.size).unwrap_or(1);
                let mut m = Vec::new();
                for k in 0..n {
                    m.extend(region(lam, c.a + k, c.b + k));
                }
                r.monomial(&m)
            } else {
                LaurentPoly::one()
            };
            r.map.insert(v, img);
        }
        r
    }

    pub fn for_system(sys: &mut SteepestSystem) -> Self {
        Restriction::new(&sys.lam, &sys.thetas, &mut sys.table)
    }

    fn monomial(&self, cells: &[Cell]) -> LaurentPoly {
        LaurentPoly::monomial(
            Monomial::from_exponents(cells.iter().map(|c| (self.x[c], 1))),
            1.into(),
        )
    }

    /// Z_{a,b}.
    pub fn z_leading(&self, a: u32, b: u32) -> Result<LaurentPoly, EngineError> {
        let c = Cell::new(a, b);
        let star = self.lam.extended();
        if !star.contains(c) {
            return Err(DiagramError::BoxOutside(c).into());
        }
        if !self.lam.contains(c) {
            return Ok(LaurentPoly::one());
        }
        let n = star.square_at(a, b)?.size;
        let mut m = Vec::new();
        for k in 0..n {
            m.extend(region(&self.lam, a + k, b + k));
        }
        Ok(self.monomial(&m))
    }

    /// Σ over μ ⊆ λ_{a,b} of x^{λ_{a,b} \ μ}.
    pub fn bs_direct(&self, a: u32, b: u32) -> Result<LaurentPoly, EngineError> {
        let c = Cell::new(a, b);
        if !self.lam.extended().contains(c) {
            return Err(DiagramError::BoxOutside(c).into());
        }
        let sub = self.lam.se_region(a, b);
        let mut out = LaurentPoly::zero();
        for mu in sub.subdiagrams() {
            let rest: Vec<Cell> = sub
                .cells()
                .filter(|&x| !mu.contains(x))
                .map(|x| Cell::new(x.a + a - 1, x.b + b - 1))
                .collect();
            out = &out + &self.monomial(&rest);
        }
        Ok(out)
    }

    /// Nested families μ_1, …, μ_m with μ_i ⊆ λ_{a+i−1,b+i−1} and (r,s) ∈ μ_i ⇒ (r+1,s+1) ∈ μ_{i+1}.
    pub fn bs_pyramid_direct(&self, a: u32, b: u32, m: u32) -> Result<LaurentPoly, EngineError> {
        if !self.lam.extended().fits_square(a, b, m) {
            return Err(EngineError::SquareDoesNotFit { a, b, m });
        }
        let layers: Vec<(Vec<Cell>, Vec<BTreeSet<Cell>>)> = (0..m)
            .map(|i| {
                let (aa, bb) = (a + i, b + i);
                let sub = self.lam.se_region(aa, bb);
                let full: Vec<Cell> = region(&self.lam, aa, bb);
                let choices = sub
                    .subdiagrams()
                    .into_iter()
                    .map(|mu| {
                        mu.cells()
                            .map(|x| Cell::new(x.a + aa - 1, x.b + bb - 1))
                            .collect()
                    })
                    .collect();
                (full, choices)
            })
            .collect();
        let mut out = LaurentPoly::zero();
        let mut picked: Vec<&BTreeSet<Cell>> = Vec::new();
        self.nest(&layers, &mut picked, &mut out);
        Ok(out)
    }

    fn nest<'a>(
        &self,
        layers: &'a [(Vec<Cell>, Vec<BTreeSet<Cell>>)],
        picked: &mut Vec<&'a BTreeSet<Cell>>,
        out: &mut LaurentPoly,
    ) {
        let i = picked.len();
        if i == layers.len() {
            let mut rest = Vec::new();
            for (l, mu) in layers.iter().zip(picked.iter()) {
                rest.extend(l.0.iter().copied().filter(|c| !mu.contains(c)));
            }
            *out = &*out + &self.monomial(&rest);
            return;
        }
        for mu in &layers[i].1 {
            if let Some(prev) = picked.last() {
                if !prev
                    .iter()
                    .all(|c| mu.contains(&Cell::new(c.a + 1, c.b + 1)))
                {
                    continue;
                }
            }
            picked.push(mu);
            self.nest(layers, picked, out);
            picked.pop();
        }
    }

    /// θ → x substitution; the result must be a positive polynomial.
    pub fn specialize(&self, p: &LaurentPoly) -> Result<LaurentPoly, EngineError> {
        let q = p.substitute(&self.map)?;
        if !q.is_polynomial() || !q.is_positive() {
            return Err(EngineError::NonPolynomialResult);
        }
        Ok(q)
    }
}

pub fn bs_restriction(lam: &Partition) -> Result<(VarTable, Restriction), EngineError> {
    let mut sys = SteepestSystem::new(lam, crate::octahedron::DEFAULT_MARGIN)?;
    let r = Restriction::for_system(&mut sys);
    Ok((sys.table, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(s: &str) -> (SteepestSystem, Restriction) {
        let mut sys = SteepestSystem::new(&s.parse().unwrap(), 2).unwrap();
        let r = Restriction::for_system(&mut sys);
        (sys, r)
    }

    fn px(sys: &mut SteepestSystem, s: &str) -> LaurentPoly {
        LaurentPoly::parse(s, &mut sys.table).unwrap()
    }

    #[test]
    fn restriction_images() {
        let (mut sys, r) = setup("2,1");
        let th = |sys: &SteepestSystem, a, b| sys.thetas[&Cell::new(a, b)];
        assert_eq!(r.map[&th(&sys, 1, 1)], px(&mut sys, "x[1,1]*x[1,2]*x[2,1]"));
        assert_eq!(r.map[&th(&sys, 1, 2)], px(&mut sys, "x[1,2]"));
        assert_eq!(r.map[&th(&sys, 2, 1)], px(&mut sys, "x[2,1]"));
        assert!(r.map[&th(&sys, 1, 3)].is_one());
    }

    #[test]
    fn leading_terms() {
        let (mut sys, r) = setup("2,2");
        assert_eq!(
            r.z_leading(1, 1).unwrap(),
            px(&mut sys, "x[1,1]*x[1,2]*x[2,1]*x[2,2]^2")
        );
        assert!(r.z_leading(3, 1).unwrap().is_one());
    }

    #[test]
    fn direct_sums() {
        let (mut sys, r) = setup("2,1");
        let want = px(
            &mut sys,
            "1 + x[1,2] + x[2,1] + x[1,2]*x[2,1] + x[1,1]*x[1,2]*x[2,1]",
        );
        assert_eq!(r.bs_direct(1, 1).unwrap(), want);
        assert_eq!(r.bs_direct(2, 1).unwrap(), px(&mut sys, "1 + x[2,1]"));
        assert!(r.bs_direct(1, 3).unwrap().is_one());
        let p = sys.p(1, 1).unwrap();
        assert_eq!(r.specialize(&p).unwrap(), want);
        let p = sys.p(2, 1).unwrap();
        assert_eq!(r.specialize(&p).unwrap(), px(&mut sys, "1 + x[2,1]"));
    }

    #[test]
    fn pyramid_direct() {
        let (mut sys, r) = setup("2,1");
        assert_eq!(
            r.bs_pyramid_direct(1, 1, 1).unwrap(),
            r.bs_direct(1, 1).unwrap()
        );
        assert_eq!(
            r.bs_pyramid_direct(1, 1, 2).unwrap(),
            px(&mut sys, "x[1,1]*x[1,2]*x[2,1]")
        );
        let (mut sys, r) = setup("2,2");
        let v = sys.pyramid(1, 1, 2).unwrap();
        assert_eq!(
            r.specialize(&v).unwrap(),
            r.bs_pyramid_direct(1, 1, 2).unwrap()
        );
    }
}

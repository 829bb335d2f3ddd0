//! Sparse multivariate Laurent polynomials with big-integer coefficients.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::{self, Write as _};
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;

/// Index of a variable in a [`VarTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

/// Ordered list of variable display names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    index: BTreeMap<String, VarId>,
}

impl VarTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id for `name`, inserting it if absent.
    pub fn intern(&mut self, name: &str) -> VarId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = VarId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: VarId) -> Option<&str> {
        self.names.get(id.0 as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &str)> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| (VarId(i as u32), n.as_str()))
    }
}

/// Product of variable powers, exponents possibly negative, zeros never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(VarId, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(alloc::vec![(v, 1)])
    }

    pub fn pow_of(v: VarId, e: i32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial(alloc::vec![(v, e)])
        }
    }

    pub fn from_exponents<I: IntoIterator<Item = (VarId, i32)>>(it: I) -> Self {
        let mut acc: BTreeMap<VarId, i32> = BTreeMap::new();
        for (v, e) in it {
            *acc.entry(v).or_insert(0) += e;
        }
        Monomial(acc.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn exponent(&self, v: VarId) -> i32 {
        match self.0.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn exponents(&self) -> &[(VarId, i32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&(_, e)| e as i64).sum()
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&(_, e)| e > 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    /// True when every exponent of `self` is at least the matching exponent of `other`.
    fn dominates(&self, other: &Monomial) -> bool {
        other.0.iter().all(|&(v, e)| self.exponent(v) >= e)
            && self.0.iter().all(|&(v, e)| e >= other.exponent(v))
    }

    /// Graded lexicographic comparison over VarId index.
    pub fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let mut vars: Vec<VarId> = self.0.iter().chain(other.0.iter()).map(|p| p.0).collect();
            vars.sort();
            vars.dedup();
            for v in vars {
                let c = self.exponent(v).cmp(&other.exponent(v));
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    }

    fn min_with(&self, other: &Monomial) -> Monomial {
        let mut vars: Vec<VarId> = self.0.iter().chain(other.0.iter()).map(|p| p.0).collect();
        vars.sort();
        vars.dedup();
        Monomial::from_exponents(
            vars.into_iter()
                .map(|v| (v, self.exponent(v).min(other.exponent(v)))),
        )
    }
}

/// Laurent polynomial in canonical sparse form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(Monomial::one(), BigInt::from(c))
    }

    pub fn var(v: VarId) -> Self {
        Self::monomial(Monomial::var(v), BigInt::one())
    }

    pub fn monomial(m: Monomial, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(it: I) -> Self {
        let mut p = LaurentPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_monomial()
            .map_or(false, |(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// The single term, when there is exactly one.
    pub fn as_monomial(&self) -> Option<(&Monomial, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Every coefficient strictly positive (and at least one term).
    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.terms.values().all(|c| c.is_positive())
    }

    /// No negative exponents anywhere.
    pub fn is_polynomial(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.exponents().iter().all(|&(_, e)| e >= 0))
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_default()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn variables(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self
            .terms
            .keys()
            .flat_map(|m| m.exponents().iter().map(|p| p.0))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Leading term under graded lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().max_by(|a, b| a.0.grlex_cmp(b.0))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> LaurentPoly {
        let mut base = self.clone();
        let mut acc = LaurentPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Entrywise minimum exponent over all terms.
    fn min_exponents(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |acc, m| acc.min_with(m))
    }

    /// Inverse of a unit monomial `±m`.
    pub fn try_inverse(&self) -> Option<LaurentPoly> {
        let (m, c) = self.as_monomial()?;
        if c.abs().is_one() {
            Some(LaurentPoly::monomial(m.inv(), c.clone()))
        } else {
            None
        }
    }

    /// Exact quotient `self / den`.
    pub fn exact_div(&self, den: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        if let Some((m, c)) = den.as_monomial() {
            let mut terms = BTreeMap::new();
            let inv = m.inv();
            for (k, x) in &self.terms {
                let (q, r) = x.div_rem(c);
                if !r.is_zero() {
                    return Err(AlgebraError::NotDivisible);
                }
                terms.insert(k.mul(&inv), q);
            }
            return Ok(LaurentPoly { terms });
        }
        let sn = self.min_exponents();
        let sd = den.min_exponents();
        let mut rem = self.mul_monomial(&sn.inv());
        let d = den.mul_monomial(&sd.inv());
        let (ld, lc) = {
            let (m, c) = d.leading_term().expect("nonzero");
            (m.clone(), c.clone())
        };
        let mut quot = LaurentPoly::zero();
        while let Some((lm, lcoef)) = rem.leading_term() {
            if !lm.dominates(&ld) {
                return Err(AlgebraError::NotDivisible);
            }
            let (q, r) = lcoef.div_rem(&lc);
            if !r.is_zero() {
                return Err(AlgebraError::NotDivisible);
            }
            let qm = lm.div(&ld);
            let step = d.mul_monomial(&qm).scale(&q);
            quot.add_term(qm, q);
            rem = &rem - &step;
        }
        Ok(quot.mul_monomial(&sn.div(&sd)))
    }

    /// Homomorphic image under `map`; unmapped variables are kept.
    pub fn substitute(
        &self,
        map: &BTreeMap<VarId, LaurentPoly>,
    ) -> Result<LaurentPoly, AlgebraError> {
        let mut inverses: BTreeMap<VarId, LaurentPoly> = BTreeMap::new();
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let mut term = LaurentPoly::monomial(Monomial::one(), c.clone());
            let mut kept = Vec::new();
            for &(v, e) in m.exponents() {
                let image = match map.get(&v) {
                    Some(img) => img,
                    None => {
                        kept.push((v, e));
                        continue;
                    }
                };
                let factor = if e >= 0 {
                    image.pow(e as u32)
                } else {
                    if !inverses.contains_key(&v) {
                        let inv = image
                            .try_inverse()
                            .ok_or(AlgebraError::NonInvertibleImage(v))?;
                        inverses.insert(v, inv);
                    }
                    inverses[&v].pow((-e) as u32)
                };
                term = &term * &factor;
            }
            out = &out + &term.mul_monomial(&Monomial::from_exponents(kept));
        }
        Ok(out)
    }

    /// Renders in the `coeff*name^exp` grammar.
    pub fn render(&self, table: &VarTable) -> Result<String, AlgebraError> {
        if self.is_zero() {
            return Ok("0".to_string());
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mag = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                parts.push(mag.to_string());
            }
            for &(v, e) in m.exponents() {
                let name = table.name(v).ok_or(AlgebraError::UnknownVar(v))?;
                if e == 1 {
                    parts.push(name.to_string());
                } else {
                    let mut t = String::new();
                    let _ = write!(t, "{}^{}", name, e);
                    parts.push(t);
                }
            }
            s.push_str(&parts.join("*"));
        }
        Ok(s)
    }

    /// Parses the `coeff*name^exp` grammar, interning names into `table`.
    pub fn parse(text: &str, table: &mut VarTable) -> Result<LaurentPoly, AlgebraError> {
        Parser {
            s: text.as_bytes(),
            pos: 0,
        }
        .poly(table)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self) -> AlgebraError {
        AlgebraError::Parse(self.pos)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    // '-' or the UTF-8 minus sign
    fn eat_minus(&mut self) -> bool {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return true;
        }
        if self.s[self.pos..].starts_with("\u{2212}".as_bytes()) {
            self.pos += 3;
            return true;
        }
        false
    }

    fn poly(&mut self, table: &mut VarTable) -> Result<LaurentPoly, AlgebraError> {
        let mut out = LaurentPoly::zero();
        self.skip_ws();
        let mut neg = self.eat_minus();
        loop {
            self.skip_ws();
            let (m, mut c) = self.term(table)?;
            if neg {
                c = -c;
            }
            out.add_term(m, c);
            self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => {
                    self.pos += 1;
                    neg = false;
                }
                _ => {
                    if !self.eat_minus() {
                        return Err(self.err());
                    }
                    neg = true;
                }
            }
        }
    }

    fn int(&mut self) -> Result<BigInt, AlgebraError> {
        let start = self.pos;
        while self.peek().map_or(false, |b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err());
        }
        BigInt::parse_bytes(&self.s[start..self.pos], 10).ok_or(AlgebraError::Parse(start))
    }

    fn name(&mut self) -> Result<&str, AlgebraError> {
        let start = self.pos;
        match self.peek() {
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => self.pos += 1,
            _ => return Err(self.err()),
        }
        while self
            .peek()
            .map_or(false, |b| b.is_ascii_alphanumeric() || b == b'_')
        {
            self.pos += 1;
        }
        if self.peek() == Some(b'[') {
            while self.peek().map_or(false, |b| b != b']') {
                self.pos += 1;
            }
            if self.peek() != Some(b']') {
                return Err(self.err());
            }
            self.pos += 1;
        }
        core::str::from_utf8(&self.s[start..self.pos]).map_err(|_| AlgebraError::Parse(start))
    }

    fn term(&mut self, table: &mut VarTable) -> Result<(Monomial, BigInt), AlgebraError> {
        let mut coeff = BigInt::one();
        let mut exps = Vec::new();
        loop {
            self.skip_ws();
            if self.peek().map_or(false, |b| b.is_ascii_digit()) {
                coeff *= self.int()?;
            } else {
                let id = table.intern(self.name()?);
                self.skip_ws();
                let mut e = 1i32;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.skip_ws();
                    let neg = self.eat_minus();
                    let v = self.int()?;
                    let v: i32 = i32::try_from(v).map_err(|_| self.err())?;
                    e = if neg { -v } else { v };
                }
                exps.push((id, e));
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((Monomial::from_exponents(exps), coeff));
            }
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$f(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(c)
    }
}

impl From<VarId> for LaurentPoly {
    fn from(v: VarId) -> Self {
        LaurentPoly::var(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, t: &mut VarTable) -> LaurentPoly {
        LaurentPoly::parse(s, t).unwrap()
    }

    #[test]
    fn cancellation_and_identity() {
        let mut t = VarTable::new();
        let a = p("x + y", &mut t);
        let b = p("x - y", &mut t);
        assert_eq!(&a + &b, p("2*x", &mut t));
        assert_eq!(&a + &LaurentPoly::zero(), a);
    }

    #[test]
    fn products() {
        let mut t = VarTable::new();
        assert!((p("x", &mut t) * p("x^-1", &mut t)).is_one());
        let lhs = p("b + c*e", &mut t) * p("d + e*g", &mut t);
        assert_eq!(lhs, p("b*d + b*e*g + c*d*e + c*e^2*g", &mut t));
        assert!((lhs * LaurentPoly::zero()).is_zero());
    }

    #[test]
    fn division() {
        let mut t = VarTable::new();
        let q = p("x^2 - y^2", &mut t)
            .exact_div(&p("x - y", &mut t))
            .unwrap();
        assert_eq!(q, p("x + y", &mut t));
        let r = p("a + b*d", &mut t).exact_div(&p("c", &mut t));
        assert_eq!(r, Ok(p("a*c^-1 + b*d*c^-1", &mut t)));
        let r = p("a + b*d", &mut t).exact_div(&p("c + 1", &mut t));
        assert_eq!(r, Err(AlgebraError::NotDivisible));
        let num = p("a*f*h + b*d + b*e*g + c*d*e + c*e^2*g", &mut t);
        let q = num.exact_div(&p("e*f*h", &mut t)).unwrap();
        assert_eq!(q.len(), 5);
        assert_eq!(
            q,
            p(
                "a*e^-1 + b*d*e^-1*f^-1*h^-1 + b*g*f^-1*h^-1 + c*d*f^-1*h^-1 + c*e*g*f^-1*h^-1",
                &mut t
            )
        );
        assert_eq!(
            p("x", &mut t).exact_div(&LaurentPoly::zero()),
            Err(AlgebraError::DivisionByZero)
        );
    }

    #[test]
    fn laurent_division_needs_no_polynomial_quotient() {
        let mut t = VarTable::new();
        let q = p("1 + y", &mut t).exact_div(&p("x + x*y", &mut t)).unwrap();
        assert_eq!(q, p("x^-1", &mut t));
        let q = p("x^-2*y + x^-1", &mut t)
            .exact_div(&p("y + x", &mut t))
            .unwrap();
        assert_eq!(q, p("x^-2", &mut t));
    }

    #[test]
    fn substitution() {
        let mut t = VarTable::new();
        let e = p("x*y^-1", &mut t);
        let (x, y) = (t.lookup("x").unwrap(), t.lookup("y").unwrap());
        let mut map = BTreeMap::new();
        map.insert(x, p("u^2", &mut t));
        map.insert(y, p("u", &mut t));
        assert_eq!(e.substitute(&map).unwrap(), p("u", &mut t));
        assert_eq!(e.substitute(&BTreeMap::new()).unwrap(), e);
        map.insert(y, p("u + 1", &mut t));
        assert_eq!(e.substitute(&map), Err(AlgebraError::NonInvertibleImage(y)));
    }

    #[test]
    fn render_round_trip() {
        let mut t = VarTable::new();
        let e = p("-3*theta[1,1]^2*x[2,3]^-1 + 7 - aux[4]", &mut t);
        let s = e.render(&t).unwrap();
        assert_eq!(p(&s, &mut t), e);
        assert_eq!(LaurentPoly::zero().render(&t).unwrap(), "0");
        assert_eq!(p("a \u{2212} b", &mut t), p("a - b", &mut t));
    }

    #[test]
    fn parse_errors() {
        let mut t = VarTable::new();
        assert!(LaurentPoly::parse("x +", &mut t).is_err());
        assert!(LaurentPoly::parse("x ^ ", &mut t).is_err());
        assert!(LaurentPoly::parse("theta[1,1", &mut t).is_err());
    }
}

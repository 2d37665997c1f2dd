use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Rational, Var};
use crate::error::{Error, Result};

/// Sparse exponent vector, sorted by variable, exponents strictly positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Var, u32)>) -> Monomial {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in powers {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        match self.0.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
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
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|&(v, e)| {
                    let f = other.exponent(v);
                    (f > 0).then(|| (v, e.min(f)))
                })
                .collect(),
        )
    }

    pub fn without(&self, v: Var) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect())
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        for (x, y) in a.iter().zip(b.iter()) {
            if x.0 != y.0 {
                // the side holding the earlier variable has the larger exponent there
                return if x.0 < y.0 { Ordering::Greater } else { Ordering::Less };
            }
            if x.1 != y.1 {
                return x.1.cmp(&y.1);
            }
        }
        a.len().cmp(&b.len())
    }
}

/// Graded lexicographic order.
impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial with integer coefficients; no zero coefficient is stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero() -> MultiPoly {
        MultiPoly::default()
    }

    pub fn one() -> MultiPoly {
        MultiPoly::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> MultiPoly {
        MultiPoly::term(c, Monomial::one())
    }

    pub fn var(v: Var) -> MultiPoly {
        MultiPoly::term(1, Monomial::var(v))
    }

    pub fn term(c: impl Into<BigInt>, m: Monomial) -> MultiPoly {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms(ts: impl IntoIterator<Item = (Monomial, BigInt)>) -> MultiPoly {
        let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in ts {
            *terms.entry(m).or_insert_with(BigInt::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.powers().iter().map(|&(v, _)| v)).collect()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigInt) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().map(|(n, k)| (n.mul(m), k.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = MultiPoly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Largest monomial dividing every term (the zero polynomial has content 1).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Monomial::one() };
        it.fold(first.clone(), |g, m| g.gcd(m))
    }

    /// gcd of the integer coefficients, nonnegative.
    pub fn integer_content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<MultiPoly> {
        let mut terms = BTreeMap::new();
        for (n, c) in &self.terms {
            terms.insert(n.div(m)?, c.clone());
        }
        Some(MultiPoly { terms })
    }

    /// Exact evaluation; `val` supplies variable values.
    pub fn eval_with<F>(&self, mut val: F) -> Result<Rational>
    where
        F: FnMut(Var) -> Option<Rational>,
    {
        let mut cache: HashMap<Var, Rational> = HashMap::new();
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = Rational::from_integer(c.clone());
            for &(v, e) in m.powers() {
                let x = match cache.get(&v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = val(v).ok_or(Error::MissingAssignment(v))?;
                        cache.insert(v, x.clone());
                        x
                    }
                };
                if x.is_zero() {
                    t = Rational::zero();
                    break;
                }
                t *= num_traits::pow(x, e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Replace `v` by a polynomial.
    pub fn compose_var(&self, v: Var, g: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        let mut powers: Vec<MultiPoly> = vec![MultiPoly::one()];
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * g;
                powers.push(next);
            }
            let rest = MultiPoly::term(c.clone(), m.without(v));
            out = &out + &(&rest * &powers[e]);
        }
        out
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            let e = terms.entry(m.clone()).or_insert_with(BigInt::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(m);
            }
        }
        MultiPoly { terms }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(self.len() * rhs.len());
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                *acc.entry(m.mul(n)).or_insert_with(BigInt::zero) += c * d;
            }
        }
        MultiPoly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly { (&self).$f(&rhs) }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: &MultiPoly) -> MultiPoly { (&self).$f(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

/// `q` with `f = q * g`, by multivariate division on leading terms.
pub fn exact_divide(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
    if g.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let fail = || Error::NotDivisible { dividend: f.to_string(), divisor: g.to_string() };
    if g.len() == 1 {
        let (gm, gc) = g.leading_term().unwrap();
        let mut terms = BTreeMap::new();
        for (m, c) in &f.terms {
            let (qc, rem) = c.div_rem(gc);
            if !rem.is_zero() {
                return Err(fail());
            }
            terms.insert(m.div(gm).ok_or_else(fail)?, qc);
        }
        return Ok(MultiPoly { terms });
    }
    let (gm, gc) = g.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
    let mut rem = f.clone();
    let mut quot = MultiPoly::zero();
    while let Some((rm, rc)) = rem.leading_term() {
        let m = rm.div(&gm).ok_or_else(fail)?;
        let (c, r) = rc.div_rem(&gc);
        if !r.is_zero() {
            return Err(fail());
        }
        let t = MultiPoly::term(c, m);
        rem = &rem - &(&t * g);
        quot = &quot + &t;
    }
    Ok(quot)
}

/// Exact evaluation under an assignment.
pub fn substitute(f: &MultiPoly, sigma: &HashMap<Var, Rational>) -> Result<Rational> {
    f.eval_with(|v| sigma.get(&v).cloned())
}

/// `f = sum t^e c_e`, ascending in `e`, zero parts omitted.
pub fn t_degree_split(f: &MultiPoly, t: Var) -> Vec<(u32, MultiPoly)> {
    let mut parts: BTreeMap<u32, Vec<(Monomial, BigInt)>> = BTreeMap::new();
    for (m, c) in &f.terms {
        parts.entry(m.exponent(t)).or_default().push((m.without(t), c.clone()));
    }
    parts.into_iter().map(|(e, ts)| (e, MultiPoly::from_terms(ts))).collect()
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for MultiPoly {
    type Err = Error;

    /// Accepts sums, products, integer powers, parentheses and unary minus.
    fn from_str(s: &str) -> Result<MultiPoly> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err());
        }
        Ok(out)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self) -> Error {
        Error::Parse(format!("bad polynomial at byte {}: {:?}", self.pos, String::from_utf8_lossy(self.src)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.product()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if c == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc * self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err())?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok().and_then(|t| t.parse().ok()).ok_or_else(|| self.err())
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err());
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(MultiPoly::constant(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                if self.src.get(self.pos) == Some(&b'[') {
                    while self.pos < self.src.len() && self.src[self.pos] != b']' {
                        self.pos += 1;
                    }
                    self.pos += 1;
                }
                let text =
                    std::str::from_utf8(&self.src[start..self.pos.min(self.src.len())]).map_err(|_| self.err())?;
                Ok(MultiPoly::var(text.parse()?))
            }
            _ => Err(self.err()),
        }
    }
}

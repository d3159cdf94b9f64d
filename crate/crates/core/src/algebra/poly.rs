use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::param::Param;

/// Exact rational coefficient. Always stored in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A power product of parameters. Exponents are positive and the factors are
/// sorted by the canonical parameter order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Param, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(p: Param) -> Monomial {
        Monomial(vec![(p, 1)])
    }

    pub fn from_factors<I: IntoIterator<Item = (Param, u32)>>(factors: I) -> Monomial {
        let mut acc: BTreeMap<Param, u32> = BTreeMap::new();
        for (p, e) in factors {
            *acc.entry(p).or_insert(0) += e;
        }
        Monomial(acc.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, p: &Param) -> u32 {
        self.0
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Param, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (pa, ea) = &self.0[i];
            let (pb, eb) = &other.0[j];
            match pa.cmp(pb) {
                Ordering::Less => {
                    out.push((pa.clone(), *ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((pb.clone(), *eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((pa.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (p, e) in &self.0 {
            let d = if j < other.0.len() && &other.0[j].0 == p {
                j += 1;
                other.0[j - 1].1
            } else {
                0
            };
            if d > *e {
                return None;
            }
            if e - d > 0 {
                out.push((p.clone(), e - d));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the exponent of the
    /// earliest parameter in canonical order.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((pa, ea)), Some((pb, eb))) => match pa.cmp(pb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (n, (p, e)) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Multivariate polynomial with rational coefficients in named parameters.
///
/// The term map never holds a zero coefficient, so two polynomials are equal
/// exactly when their maps are equal.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Poly {
        Poly::constant(integer(n))
    }

    pub fn var(p: Param) -> Poly {
        Poly::term(Rational::one(), Monomial::var(p))
    }

    pub fn term(c: Rational, m: Monomial) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self
                .terms
                .get(&Monomial::one())
                .cloned(),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms from the largest monomial down, which is the printing order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, p: &Param) -> u32 {
        self.terms.keys().map(|m| m.exponent(p)).max().unwrap_or(0)
    }

    pub fn params(&self) -> BTreeSet<Param> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(p, _)| p.clone()))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Scales so the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            Some((_, lc)) => self.scale(&lc.recip()),
            None => Poly::zero(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Simultaneous substitution. Parameters absent from the map are kept.
    pub fn substitute(&self, s: &BTreeMap<Param, Poly>) -> Poly {
        if s.is_empty() {
            return self.clone();
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut prod = Poly::constant(c.clone());
            for (p, e) in m.factors() {
                match s.get(p) {
                    Some(image) => prod = &prod * &image.pow(*e),
                    None => kept.push((p.clone(), *e)),
                }
            }
            let rest = Poly::term(Rational::one(), Monomial(kept));
            out += &prod * &rest;
        }
        out
    }

    /// Partial evaluation at rational values.
    pub fn eval(&self, point: &BTreeMap<Param, Rational>) -> Poly {
        let s: BTreeMap<Param, Poly> = point
            .iter()
            .map(|(p, v)| (p.clone(), Poly::constant(v.clone())))
            .collect();
        self.substitute(&s)
    }

    /// Full evaluation; `None` if some parameter has no value.
    pub fn eval_rational(&self, point: &BTreeMap<Param, Rational>) -> Option<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (p, e) in m.factors() {
                let v = point.get(p)?;
                t *= num_traits::pow(v.clone(), *e as usize);
            }
            acc += t;
        }
        Some(acc)
    }

    /// Multivariate division by a single divisor under the graded
    /// lexicographic order. The remainder is zero iff `divisor` divides
    /// `self`, and is the normal form modulo the principal ideal.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let (lm, lc) = match divisor.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return (Poly::zero(), self.clone()),
        };
        let mut quotient = Poly::zero();
        let mut remainder = Poly::zero();
        let mut p = self.clone();
        while let Some((m, c)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            match m.checked_div(&lm) {
                Some(q) => {
                    let qc = &c / &lc;
                    let step = Poly::term(qc, q);
                    p -= &step * divisor;
                    quotient += step;
                }
                None => {
                    p.terms.remove(&m);
                    remainder.add_term(m, c);
                }
            }
        }
        (quotient, remainder)
    }

    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Reduces modulo `p^2 - 1`: every exponent of `p` becomes its parity.
    pub fn reduce_involution(&self, p: &Param) -> Poly {
        if self.degree_in(p) < 2 {
            return self.clone();
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let factors = m.factors().iter().filter_map(|(q, e)| {
                if q == p {
                    (e % 2 == 1).then(|| (q.clone(), 1))
                } else {
                    Some((q.clone(), *e))
                }
            });
            out.add_term(Monomial(factors.collect()), c.clone());
        }
        out
    }

    /// Remainder after dividing successively by each relation. A zero result
    /// proves membership in the ideal the relations generate; for a single
    /// relation it decides membership.
    pub fn reduce_modulo(&self, relations: &[Poly]) -> Poly {
        relations
            .iter()
            .filter(|r| !r.is_zero())
            .fold(self.clone(), |acc, r| acc.div_rem(r).1)
    }
}

/// A polynomial flattened against a fixed variable order for repeated
/// evaluation at rational points.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    terms: Vec<(Rational, Vec<(usize, u32)>)>,
}

impl CompiledPoly {
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (c, factors) in &self.terms {
            let mut t = c.clone();
            for (idx, e) in factors {
                t *= num_traits::pow(point[*idx].clone(), *e as usize);
            }
            acc += t;
        }
        acc
    }

    pub fn is_zero_at(&self, point: &[Rational]) -> bool {
        self.eval(point).is_zero()
    }
}

impl Poly {
    /// `None` if the polynomial mentions a parameter outside `order`.
    pub fn compile(&self, order: &[Param]) -> Option<CompiledPoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut factors = Vec::with_capacity(m.factors().len());
            for (p, e) in m.factors() {
                factors.push((order.iter().position(|q| q == p)?, *e));
            }
            terms.push((c.clone(), factors));
        }
        Some(CompiledPoly { terms })
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    /// Compares canonical term lists from the leading term down.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a = self.terms();
        let b = other.terms();
        a.cmp(b)
    }
}

impl From<Param> for Poly {
    fn from(p: Param) -> Poly {
        Poly::var(p)
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Poly {
        Poly::int(n)
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Poly {
        Poly::constant(c)
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign<Poly> for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl SubAssign<Poly> for Poly {
    fn sub_assign(&mut self, rhs: Poly) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

fn write_rational(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.denom().is_one() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Poly {
    /// Canonical text: terms in descending graded-lex order, e.g.
    /// `alpha^2 - 1/2*beta*gamma + 3`. The output parses back to the same
    /// polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (n, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if m.is_one() {
                write_rational(f, &abs)?;
            } else {
                if !abs.is_one() {
                    write_rational(f, &abs)?;
                    f.write_str("*")?;
                }
                write!(f, "{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

//! Exact rational functions in the formal Euler characteristic χ.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ChiError;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().ok()?;
        let b: BigInt = b.trim().parse().ok()?;
        if b.is_zero() {
            return None;
        }
        Some(Rational::new(a, b))
    } else {
        Some(Rational::from_integer(s.parse().ok()?))
    }
}

pub fn rational_to_string(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Order factors by degree, then linear factors by increasing root.
pub fn sort_factors(fs: &mut Vec<Poly>) {
    fs.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.coeffs().cmp(a.coeffs())));
    fs.dedup();
}

/// Polynomial in χ with ascending rational coefficients and no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn x() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// The monic linear factor χ − k.
    pub fn linear(k: Rational) -> Self {
        Self::from_coeffs(vec![-k, Rational::one()])
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// True for c·χ^k.
    pub fn is_monomial(&self) -> bool {
        match self.valuation() {
            Some(v) => v + 1 == self.coeffs.len(),
            None => false,
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    fn shift_down(&self, k: usize) -> Poly {
        Poly::from_coeffs(self.coeffs[k..].to_vec())
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) => self.scale(&l.recip()),
            None => Poly::zero(),
        }
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.lead().unwrap().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Text form in the variable `x`, highest degree first.
    pub fn to_text(&self) -> String {
        self.render("x", |c| rational_to_string(c), |k| format!("^{k}"), "*")
    }

    pub fn to_latex(&self) -> String {
        self.render(
            "\\chi",
            |c| {
                if c.is_integer() {
                    c.numer().to_string()
                } else {
                    format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
                }
            },
            |k| if k < 10 { format!("^{k}") } else { format!("^{{{k}}}") },
            "",
        )
    }

    fn render(
        &self,
        var: &str,
        coef: impl Fn(&Rational) -> String,
        power: impl Fn(usize) -> String,
        times: &str,
    ) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            if k == 0 {
                out.push_str(&coef(&a));
                continue;
            }
            if !a.is_one() {
                out.push_str(&coef(&a));
                out.push_str(times);
            }
            out.push_str(var);
            if k > 1 {
                out.push_str(&power(k));
            }
        }
        out
    }

    fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = o.coeffs.get(i);
            v.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::from_coeffs(v)
    }
}

/// Reduced fraction of polynomials in χ with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ChiScalar {
    num: Poly,
    den: Poly,
}

impl Default for ChiScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl ChiScalar {
    pub fn zero() -> Self {
        ChiScalar { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_rational(int(k))
    }

    pub fn from_rational(q: Rational) -> Self {
        ChiScalar { num: Poly::constant(q), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        ChiScalar { num: p, den: Poly::one() }
    }

    /// The variable χ.
    pub fn chi() -> Self {
        Self::from_poly(Poly::x())
    }

    /// χ − k.
    pub fn chi_minus(k: i64) -> Self {
        Self::from_poly(Poly::linear(int(k)))
    }

    pub fn chi_pow(k: i32) -> Self {
        if k >= 0 {
            Self::from_poly(Poly::monomial(Rational::one(), k as usize))
        } else {
            ChiScalar { num: Poly::one(), den: Poly::monomial(Rational::one(), (-k) as usize) }
        }
    }

    pub fn from_parts(num: Poly, den: Poly) -> Result<Self, ChiError> {
        if den.is_zero() {
            return Err(ChiError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_monomial() {
            let k = den.degree().unwrap();
            let c = den.lead().unwrap().recip();
            let m = k.min(num.valuation().unwrap());
            let num = num.shift_down(m).scale(&c);
            let den = Poly::monomial(Rational::one(), k - m);
            return ChiScalar { num, den };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let c = den.lead().unwrap().recip();
        ChiScalar { num: num.scale(&c), den: den.scale(&c) }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Constant value, if the scalar does not depend on χ.
    pub fn as_rational(&self) -> Option<Rational> {
        if !self.den.is_one() {
            return None;
        }
        match self.num.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.num.coeffs()[0].clone()),
            _ => None,
        }
    }

    pub fn checked_div(&self, o: &ChiScalar) -> Result<ChiScalar, ChiError> {
        if o.is_zero() {
            return Err(ChiError::DivisionByZero);
        }
        Ok(Self::normalized(&self.num * &o.den, &self.den * &o.num))
    }

    pub fn inv(&self) -> Result<ChiScalar, ChiError> {
        ChiScalar::one().checked_div(self)
    }

    pub fn pow(&self, k: i32) -> Result<ChiScalar, ChiError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = ChiScalar::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn scale(&self, q: &Rational) -> ChiScalar {
        if q.is_zero() {
            return Self::zero();
        }
        ChiScalar { num: self.num.scale(q), den: self.den.clone() }
    }

    pub fn sign_mul(&self, s: i8) -> ChiScalar {
        match s {
            1 => self.clone(),
            -1 => -self,
            _ => Self::zero(),
        }
    }

    /// Evaluate at a rational point.
    pub fn eval_at(&self, x: &Rational) -> Result<Rational, ChiError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            let factor = self
                .denominator_support()
                .into_iter()
                .find(|f| f.eval(x).is_zero())
                .unwrap_or_else(|| self.den.clone());
            return Err(ChiError::Pole { factor: factor.to_text(), point: rational_to_string(x) });
        }
        Ok(self.num.eval(x) / d)
    }

    /// Evaluate at χ = 2 + (−1)ⁿ·2g.
    pub fn specialize(&self, n: u32, g: u64) -> Result<Rational, ChiError> {
        self.eval_at(&genus_chi(n, g)?)
    }

    /// Monic irreducible factors of the denominator. Rational roots are split off as
    /// linear factors; any remaining part without rational roots is reported whole.
    pub fn denominator_support(&self) -> Vec<Poly> {
        let mut out = Vec::new();
        let mut rest = self.den.clone();
        while rest.degree().unwrap_or(0) > 0 {
            match rational_root(&rest) {
                Some(r) => {
                    let f = Poly::linear(r);
                    while rest.degree().unwrap_or(0) > 0 {
                        let (q, rem) = rest.div_rem(&f);
                        if !rem.is_zero() {
                            break;
                        }
                        rest = q;
                    }
                    out.push(f);
                }
                None => {
                    out.push(rest.monic());
                    break;
                }
            }
        }
        sort_factors(&mut out);
        out
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        if self.num.lead().unwrap().is_negative() {
            return format!("-{}", (-self).to_text_positive());
        }
        self.to_text_positive()
    }

    fn to_text_positive(&self) -> String {
        if self.den.is_one() {
            return self.num.to_text();
        }
        let num = self.num.to_text();
        let num = if self.num.term_count() == 1 && !num.contains('/') && !num.contains('*') {
            num
        } else {
            format!("({num})")
        };
        let den = self.den.to_text();
        let den = if self.den.term_count() == 1 && !den.contains('*') && !den.contains('/') {
            den
        } else {
            format!("({den})")
        };
        format!("{num}/{den}")
    }

    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        if self.num.lead().unwrap().is_negative() {
            return format!("-{}", (-self).to_latex());
        }
        if self.den.is_one() {
            return self.num.to_latex();
        }
        format!("\\frac{{{}}}{{{}}}", self.num.to_latex(), self.den.to_latex())
    }

    /// Whether the printed coefficient needs parentheses before a product.
    pub fn is_compound(&self) -> bool {
        self.den.is_one() && self.num.term_count() > 1
    }
}

/// χ = 2 + (−1)ⁿ·2g, rejecting the torus case in odd dimension.
pub fn genus_chi(n: u32, g: u64) -> Result<Rational, ChiError> {
    if n % 2 == 1 && g == 1 {
        return Err(ChiError::Domain(format!("genus 1 with odd n = {n} gives χ = 0")));
    }
    let g = int(g as i64);
    let two = int(2);
    Ok(if n % 2 == 0 { &two + &two * g } else { &two - &two * g })
}

fn rational_root(p: &Poly) -> Option<Rational> {
    let c = p.coeffs();
    if c[0].is_zero() {
        return Some(Rational::zero());
    }
    let lcm = c.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = c.iter().map(|q| (q * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let a0 = ints[0].abs();
    let an = ints.last().unwrap().abs();
    let ps = small_divisors(&a0)?;
    let qs = small_divisors(&an)?;
    for q in &qs {
        for pp in &ps {
            for s in [1i64, -1] {
                let cand = Rational::new(pp * BigInt::from(s), q.clone());
                if p.eval(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.to_u64()?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
        if d > 2_000_000 {
            return None;
        }
    }
    out.sort();
    Some(out)
}

impl fmt::Display for ChiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for &ChiScalar {
    type Output = ChiScalar;
    fn add(self, o: &ChiScalar) -> ChiScalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return ChiScalar::normalized(&self.num + &o.num, self.den.clone());
        }
        ChiScalar::normalized(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub for &ChiScalar {
    type Output = ChiScalar;
    fn sub(self, o: &ChiScalar) -> ChiScalar {
        self + &(-o)
    }
}

impl Mul for &ChiScalar {
    type Output = ChiScalar;
    fn mul(self, o: &ChiScalar) -> ChiScalar {
        if self.is_zero() || o.is_zero() {
            return ChiScalar::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return ChiScalar { num: &self.num * &o.num, den: Poly::one() };
        }
        ChiScalar::normalized(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Neg for &ChiScalar {
    type Output = ChiScalar;
    fn neg(self) -> ChiScalar {
        ChiScalar { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for ChiScalar {
    type Output = ChiScalar;
    fn neg(self) -> ChiScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ChiScalar {
            type Output = ChiScalar;
            fn $m(self, o: ChiScalar) -> ChiScalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&ChiScalar> for ChiScalar {
            type Output = ChiScalar;
            fn $m(self, o: &ChiScalar) -> ChiScalar {
                (&self).$m(o)
            }
        }
        impl $tr<ChiScalar> for &ChiScalar {
            type Output = ChiScalar;
            fn $m(self, o: ChiScalar) -> ChiScalar {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&ChiScalar> for ChiScalar {
    fn add_assign(&mut self, o: &ChiScalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&ChiScalar> for ChiScalar {
    fn sub_assign(&mut self, o: &ChiScalar) {
        *self = &*self - o;
    }
}

impl MulAssign<&ChiScalar> for ChiScalar {
    fn mul_assign(&mut self, o: &ChiScalar) {
        *self = &*self * o;
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarJson {
    num: Vec<String>,
    den: Vec<String>,
}

impl Serialize for ChiScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let conv = |p: &Poly| {
            if p.is_zero() {
                vec!["0".to_string()]
            } else {
                p.coeffs().iter().map(rational_to_string).collect()
            }
        };
        ScalarJson { num: conv(&self.num), den: conv(&self.den) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChiScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ScalarJson::deserialize(d)?;
        let conv = |v: &[String]| -> Result<Poly, D::Error> {
            let cs = v
                .iter()
                .map(|s| parse_rational(s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s}"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Poly::from_coeffs(cs))
        };
        ChiScalar::from_parts(conv(&j.num)?, conv(&j.den)?).map_err(serde::de::Error::custom)
    }
}

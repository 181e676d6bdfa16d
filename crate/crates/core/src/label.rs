//! Vertex labels: monomials in the Euler class and Pontryagin classes.

use std::fmt;

use serde::{Deserialize, Serialize};

/// e^a · Π p_i^{b_i}, with `p[i - 1]` the exponent of p_i. Trailing zero exponents are trimmed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
#[serde(from = "LabelJson", into = "LabelJson")]
pub struct LabelMonomial {
    e: u32,
    p: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct LabelJson {
    e: u32,
    #[serde(default)]
    p: Vec<u32>,
}

impl From<LabelJson> for LabelMonomial {
    fn from(j: LabelJson) -> Self {
        LabelMonomial::new(j.e, j.p)
    }
}

impl From<LabelMonomial> for LabelJson {
    fn from(l: LabelMonomial) -> Self {
        LabelJson { e: l.e, p: l.p }
    }
}

/// Smallest Pontryagin index lying in the connective label algebra.
pub fn first_connective_index(n: u32) -> usize {
    (n as usize + 4) / 4
}

impl LabelMonomial {
    pub fn new(e: u32, mut p: Vec<u32>) -> Self {
        while p.last() == Some(&0) {
            p.pop();
        }
        LabelMonomial { e, p }
    }

    pub fn one() -> Self {
        Self::default()
    }

    pub fn e_pow(k: u32) -> Self {
        LabelMonomial { e: k, p: Vec::new() }
    }

    /// p_i^k.
    pub fn p_pow(i: usize, k: u32) -> Self {
        assert!(i >= 1);
        let mut p = vec![0; i];
        p[i - 1] = k;
        Self::new(0, p)
    }

    pub fn e_exp(&self) -> u32 {
        self.e
    }

    pub fn p_exp(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.p.get(i - 1).copied().unwrap_or(0)
    }

    pub fn p_exps(&self) -> &[u32] {
        &self.p
    }

    pub fn is_one(&self) -> bool {
        self.e == 0 && self.p.is_empty()
    }

    pub fn max_p_index(&self) -> usize {
        self.p.len()
    }

    pub fn mul(&self, o: &LabelMonomial) -> LabelMonomial {
        let len = self.p.len().max(o.p.len());
        let p = (0..len)
            .map(|i| self.p.get(i).copied().unwrap_or(0) + o.p.get(i).copied().unwrap_or(0))
            .collect();
        LabelMonomial::new(self.e + o.e, p)
    }

    pub fn times_e(&self) -> LabelMonomial {
        LabelMonomial { e: self.e + 1, p: self.p.clone() }
    }

    /// Divide by p_i once; caller guarantees divisibility.
    pub fn without_p(&self, i: usize) -> LabelMonomial {
        let mut p = self.p.clone();
        p[i - 1] -= 1;
        LabelMonomial::new(self.e, p)
    }

    pub fn degree(&self, n: u32) -> i64 {
        let mut d = 2 * n as i64 * self.e as i64;
        for (i, k) in self.p.iter().enumerate() {
            d += 4 * (i as i64 + 1) * *k as i64;
        }
        d
    }

    /// Smallest i ≤ bound with p_i dividing the label.
    pub fn lowest_p_up_to(&self, bound: usize) -> Option<usize> {
        (1..=bound.min(self.p.len())).find(|&i| self.p[i - 1] > 0)
    }

    /// No factor p_i with i below the connective range for dimension n.
    pub fn is_connective(&self, n: u32) -> bool {
        self.lowest_p_up_to(first_connective_index(n) - 1).is_none()
    }

    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        if self.e > 0 {
            parts.push(if self.e == 1 { "e".to_string() } else { format!("e^{}", self.e) });
        }
        for (i, k) in self.p.iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(format!("p{}", i + 1)),
                k => parts.push(format!("p{}^{}", i + 1, k)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn to_latex(&self) -> String {
        let pow = |k: u32| if k < 10 { format!("^{k}") } else { format!("^{{{k}}}") };
        let mut parts = Vec::new();
        if self.e > 0 {
            parts.push(if self.e == 1 { "e".to_string() } else { format!("e{}", pow(self.e)) });
        }
        for (i, k) in self.p.iter().enumerate() {
            let idx = if i + 1 < 10 { format!("_{}", i + 1) } else { format!("_{{{}}}", i + 1) };
            match k {
                0 => {}
                1 => parts.push(format!("p{idx}")),
                k => parts.push(format!("p{idx}{}", pow(*k))),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

impl fmt::Display for LabelMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// All monomials in e, p_lo..p_hi of exactly the given degree (for dimension n).
pub fn monomials_of_degree(n: u32, degree: i64, lo: usize, hi: usize) -> Vec<LabelMonomial> {
    let mut out = Vec::new();
    if degree < 0 {
        return out;
    }
    let mut p = vec![0u32; hi.max(lo.saturating_sub(1))];
    fn rec(
        n: u32,
        i: usize,
        lo: usize,
        hi: usize,
        left: i64,
        p: &mut Vec<u32>,
        out: &mut Vec<LabelMonomial>,
    ) {
        if i > hi || i < lo {
            let e_deg = 2 * n as i64;
            if left % e_deg == 0 {
                out.push(LabelMonomial::new((left / e_deg) as u32, p.clone()));
            }
            return;
        }
        let step = 4 * i as i64;
        let mut k = 0;
        while k as i64 * step <= left {
            p[i - 1] = k;
            rec(n, i + 1, lo, hi, left - k as i64 * step, p, out);
            k += 1;
        }
        p[i - 1] = 0;
    }
    if lo > hi {
        let e_deg = 2 * n as i64;
        if degree % e_deg == 0 {
            out.push(LabelMonomial::e_pow((degree / e_deg) as u32));
        }
        return out;
    }
    rec(n, lo, lo, hi, degree, &mut p, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees() {
        assert_eq!(LabelMonomial::e_pow(2).degree(1), 4);
        assert_eq!(LabelMonomial::p_pow(2, 1).mul(&LabelMonomial::e_pow(1)).degree(3), 14);
        assert_eq!(LabelMonomial::one().degree(5), 0);
    }

    #[test]
    fn connective_range() {
        assert_eq!(first_connective_index(1), 1);
        assert_eq!(first_connective_index(3), 1);
        assert_eq!(first_connective_index(4), 2);
        assert!(!LabelMonomial::p_pow(1, 1).is_connective(4));
        assert!(LabelMonomial::p_pow(2, 1).is_connective(4));
    }

    #[test]
    fn text_forms() {
        let l = LabelMonomial::e_pow(2).mul(&LabelMonomial::p_pow(1, 3));
        assert_eq!(l.to_text(), "e^2*p1^3");
        assert_eq!(l.to_latex(), "e^2 p_1^3");
        assert_eq!(LabelMonomial::one().to_text(), "1");
    }

    #[test]
    fn monomial_enumeration() {
        let ms = monomials_of_degree(3, 12, 1, 2);
        // e has degree 6, p1 degree 4, p2 degree 8
        let texts: Vec<_> = ms.iter().map(|m| m.to_text()).collect();
        assert_eq!(texts.len(), 3, "{texts:?}");
        assert!(texts.contains(&"e^2".to_string()));
        assert!(texts.contains(&"p1^3".to_string()));
        assert!(texts.contains(&"p1*p2".to_string()));
    }
}

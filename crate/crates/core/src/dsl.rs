//! Expression language for graph vectors and the text, LaTeX and JSON output forms.
//!
//! ```text
//! expr   := sum
//! sum    := prod (('+' | '-') prod)*
//! prod   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' int)?
//! atom   := number | 'x' | kterm | 'lam(' leg ',' leg ')' factor | '(' expr ')'
//! kterm  := ('k' | 'kbar') '(' [leg (',' leg)*] [';' label] ')'
//! label  := gen ('^' int)? ('*' gen ('^' int)?)*,  gen in {e, p1, p2, ..., 1}
//! ```

use std::collections::BTreeSet;

use serde_json::json;

use crate::chi::{int, ChiScalar, Rational};
use crate::error::{Error, Result};
use crate::graph::{Flavor, LegName};
use crate::label::LabelMonomial;
use crate::rewrite::{contract_legs, reduce, CorollaVector, LabeledPartition};
use crate::vector::GraphVector;

#[derive(Clone, PartialEq, Debug)]
pub enum Expr {
    Number(Rational),
    Chi,
    Kappa { blue: bool, legs: Vec<LegName>, label: LabelMonomial, pos: usize },
    Lam { i: LegName, j: LegName, body: Box<Expr>, pos: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i32, usize),
}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            if i < b.len() && ((b[i] as char).is_ascii_alphabetic() || b[i] == b'_') {
                while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(s[st..i].to_string()), st));
            } else {
                out.push((Tok::Num(s[st..i].to_string()), st));
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(s[st..i].to_string()), st));
        } else if "+-*/^(),;".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    n: u32,
    _src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.prod()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.prod()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.prod()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn prod(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let pos = self.pos();
                self.at += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let atom = self.atom()?;
        if self.peek() == Some(&Tok::Sym('^')) {
            let pos = self.pos();
            self.at += 1;
            let neg = self.eat('-');
            let k = self.int()?;
            return Ok(Expr::Pow(Box::new(atom), if neg { -(k as i32) } else { k as i32 }, pos));
        }
        Ok(atom)
    }

    fn int(&mut self) -> Result<u32> {
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.at += 1;
                s.parse().or_else(|_| self.err("exponent too large"))
            }
            _ => self.err("expected an integer"),
        }
    }

    fn leg(&mut self) -> Result<LegName> {
        match self.peek().cloned() {
            Some(Tok::Num(s)) | Some(Tok::Ident(s)) => {
                self.at += 1;
                Ok(LegName::parse(&s))
            }
            _ => self.err("expected a leg name"),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.at += 1;
                let v: num_bigint::BigInt = s.parse().expect("digits");
                Ok(Expr::Number(Rational::from_integer(v)))
            }
            Some(Tok::Ident(id)) if id == "x" => {
                self.at += 1;
                Ok(Expr::Chi)
            }
            Some(Tok::Ident(id)) if id == "k" || id == "kbar" => {
                self.at += 1;
                self.expect('(')?;
                let mut legs = Vec::new();
                if !matches!(self.peek(), Some(Tok::Sym(';')) | Some(Tok::Sym(')'))) {
                    legs.push(self.leg()?);
                    while self.eat(',') {
                        legs.push(self.leg()?);
                    }
                }
                let label = if self.eat(';') { self.label()? } else { LabelMonomial::one() };
                self.expect(')')?;
                Ok(Expr::Kappa { blue: id == "kbar", legs, label, pos })
            }
            Some(Tok::Ident(id)) if id == "lam" => {
                self.at += 1;
                self.expect('(')?;
                let i = self.leg()?;
                self.expect(',')?;
                let j = self.leg()?;
                self.expect(')')?;
                let body = self.factor()?;
                Ok(Expr::Lam { i, j, body: Box::new(body), pos })
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(id)) => self.err(format!("unknown name '{id}'")),
            Some(_) => self.err("expected a term"),
            None => self.err("unexpected end of input"),
        }
    }

    fn label(&mut self) -> Result<LabelMonomial> {
        let mut label = LabelMonomial::one();
        loop {
            let pos = self.pos();
            let g = match self.peek().cloned() {
                Some(Tok::Ident(s)) => s,
                Some(Tok::Num(s)) if s == "1" => s,
                _ => return self.err("expected a label generator"),
            };
            self.at += 1;
            let k = if self.eat('^') { self.int()? } else { 1 };
            let m = if g == "1" {
                LabelMonomial::one()
            } else if g == "e" {
                LabelMonomial::e_pow(k)
            } else if let Some(i) = g.strip_prefix('p').and_then(|d| d.parse::<usize>().ok()).filter(|&i| i >= 1) {
                if i >= self.n as usize {
                    return Err(Error::Parse { pos, msg: format!("unknown label generator {g} for n = {}", self.n) });
                }
                LabelMonomial::p_pow(i, k)
            } else {
                return Err(Error::Parse { pos, msg: format!("unknown label generator {g}") });
            };
            label = label.mul(&m);
            if !self.eat('*') {
                return Ok(label);
            }
        }
    }
}

/// Parse an expression; Pontryagin generators must satisfy i < n.
pub fn parse(text: &str, n: u32) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len(), n, _src: text };
    let e = p.sum()?;
    if p.at < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

enum Value {
    Scalar(ChiScalar),
    Vector(GraphVector),
}

fn into_vector(v: Value, n: u32, flavor: Flavor) -> GraphVector {
    match v {
        Value::Scalar(c) => GraphVector::scalar(n, flavor, c),
        Value::Vector(g) => g,
    }
}

fn eval_value(e: &Expr, n: u32, flavor: Flavor) -> Result<Value> {
    Ok(match e {
        Expr::Number(q) => Value::Scalar(ChiScalar::from_rational(q.clone())),
        Expr::Chi => Value::Scalar(ChiScalar::chi()),
        Expr::Kappa { blue, legs, label, pos } => {
            if *blue != flavor.is_blue() {
                let which = if *blue { "kbar" } else { "k" };
                return Err(Error::FlavorMismatch(format!("{which} at position {pos} does not belong to flavor {flavor}")));
            }
            if !flavor.admits_label(n, label) {
                return Err(Error::Precondition(format!("label {label} at position {pos} is not admissible in {flavor}")));
            }
            let distinct: BTreeSet<&LegName> = legs.iter().collect();
            if distinct.len() != legs.len() {
                return Err(Error::LegMismatch(format!("repeated leg at position {pos}")));
            }
            Value::Vector(GraphVector::corolla(n, flavor, legs, label.clone()))
        }
        Expr::Lam { i, j, body, .. } => {
            let v = into_vector(eval_value(body, n, flavor)?, n, flavor);
            Value::Vector(contract_legs(&v, i, j)?)
        }
        Expr::Neg(a) => match eval_value(a, n, flavor)? {
            Value::Scalar(c) => Value::Scalar(-c),
            Value::Vector(v) => Value::Vector(v.scale(&-ChiScalar::one())),
        },
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let x = eval_value(a, n, flavor)?;
            let y = eval_value(b, n, flavor)?;
            let minus = matches!(e, Expr::Sub(..));
            match (x, y) {
                (Value::Scalar(p), Value::Scalar(q)) => Value::Scalar(if minus { p - q } else { p + q }),
                (x, y) => {
                    let x = into_vector(x, n, flavor);
                    let y = into_vector(y, n, flavor);
                    Value::Vector(if minus { x.sub(&y)? } else { x.add(&y)? })
                }
            }
        }
        Expr::Mul(a, b) => match (eval_value(a, n, flavor)?, eval_value(b, n, flavor)?) {
            (Value::Scalar(p), Value::Scalar(q)) => Value::Scalar(&p * &q),
            (Value::Scalar(p), Value::Vector(v)) | (Value::Vector(v), Value::Scalar(p)) => Value::Vector(v.scale(&p)),
            (Value::Vector(v), Value::Vector(w)) => {
                let lv: BTreeSet<&LegName> = v.legs().iter().collect();
                if w.legs().iter().any(|l| lv.contains(l)) {
                    return Err(Error::LegMismatch("a leg appears in both factors of a product".into()));
                }
                Value::Vector(v.product(&w)?)
            }
        },
        Expr::Div(a, b, pos) => {
            let Value::Scalar(q) = eval_value(b, n, flavor)? else {
                return Err(Error::Precondition(format!("division by a graph at position {pos}")));
            };
            let q = q.inv()?;
            match eval_value(a, n, flavor)? {
                Value::Scalar(p) => Value::Scalar(&p * &q),
                Value::Vector(v) => Value::Vector(v.scale(&q)),
            }
        }
        Expr::Pow(a, k, pos) => match eval_value(a, n, flavor)? {
            Value::Scalar(p) => Value::Scalar(p.pow(*k)?),
            Value::Vector(_) => return Err(Error::Precondition(format!("power of a graph at position {pos}"))),
        },
    })
}

/// Evaluate an expression to a graph vector.
pub fn eval(e: &Expr, n: u32, flavor: Flavor) -> Result<GraphVector> {
    Ok(into_vector(eval_value(e, n, flavor)?, n, flavor))
}

/// Parse and evaluate.
pub fn parse_vector(text: &str, n: u32, flavor: Flavor) -> Result<GraphVector> {
    eval(&parse(text, n)?, n, flavor)
}

/// How χ is presented in output.
#[derive(Clone, Debug, PartialEq)]
pub enum ChiMode {
    Symbolic,
    Value(Rational),
}

fn is_negative(c: &ChiScalar) -> bool {
    c.numer().lead().is_some_and(|l| l < &int(0))
}

fn specialize(c: &ChiScalar, mode: &ChiMode) -> Result<ChiScalar> {
    match mode {
        ChiMode::Symbolic => Ok(c.clone()),
        ChiMode::Value(x) => Ok(ChiScalar::from_rational(c.eval_at(x)?)),
    }
}

fn join_terms(items: Vec<(ChiScalar, String)>, latex: bool) -> String {
    if items.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (c, term)) in items.into_iter().enumerate() {
        let neg = is_negative(&c);
        let a = if neg { -c } else { c };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let body = if term == "1" {
            if latex { a.to_latex() } else { a.to_text() }
        } else if a.is_one() {
            term
        } else if latex {
            let cs = a.to_latex();
            let cs = if a.is_compound() { format!("\\left({cs}\\right)") } else { cs };
            format!("{cs}\\,{term}")
        } else {
            let cs = a.to_text();
            let cs = if a.is_compound() { format!("({cs})") } else { cs };
            format!("{cs} * {term}")
        };
        out.push_str(&body);
    }
    out
}

/// Text form of a corolla vector, e.g. `-5/2 * kappa_{e^2}`.
pub fn corolla_text(v: &CorollaVector, mode: &ChiMode) -> Result<String> {
    let blue = v.flavor.is_blue();
    let mut items = Vec::new();
    for (p, c) in &v.terms {
        let c = specialize(c, mode)?;
        if !c.is_zero() {
            items.push((c, p.to_text(blue)));
        }
    }
    Ok(join_terms(items, false))
}

/// LaTeX form of a corolla vector, e.g. `-\frac{\chi-3}{\chi}\,\kappa_{e^2}`.
pub fn corolla_latex(v: &CorollaVector, mode: &ChiMode) -> Result<String> {
    let blue = v.flavor.is_blue();
    let mut items = Vec::new();
    for (p, c) in &v.terms {
        let c = specialize(c, mode)?;
        if !c.is_zero() {
            items.push((c, p.to_latex(blue)));
        }
    }
    Ok(join_terms(items, true))
}

/// JSON form of a corolla vector.
pub fn corolla_json(v: &CorollaVector, mode: &ChiMode) -> Result<serde_json::Value> {
    let mut terms = Vec::new();
    for (p, c) in &v.terms {
        let c = specialize(c, mode)?;
        if !c.is_zero() {
            terms.push(json!({ "partition": p, "coeff": c.to_text() }));
        }
    }
    Ok(json!({ "n": v.n, "flavor": v.flavor.name(), "legs": v.legs, "terms": terms }))
}

fn kterm(blue: bool, legs: &[LegName], label: &LabelMonomial) -> String {
    let ls: Vec<String> = legs.iter().map(|l| l.to_string()).collect();
    let head = if blue { "kbar" } else { "k" };
    if label.is_one() {
        format!("{head}({})", ls.join(","))
    } else {
        format!("{head}({};{})", ls.join(","), label.to_text())
    }
}

/// Expression text whose evaluation reduces back to `v`. Requires trivial external labels.
pub fn to_dsl(v: &CorollaVector) -> Result<String> {
    let blue = v.flavor.is_blue();
    let mut items = Vec::new();
    for (p, c) in &v.terms {
        if p.external.as_ref().is_some_and(|e| !e.is_one()) {
            return Err(Error::Unsupported("external labels have no expression syntax".into()));
        }
        let sigma = product_sign(p, v.n, v.flavor)?;
        let coeff = c.sign_mul(sigma);
        let term = if p.parts.is_empty() {
            "1".to_string()
        } else {
            p.parts.iter().map(|q| kterm(blue, &q.legs, &q.label)).collect::<Vec<_>>().join(" * ")
        };
        items.push((coeff, term));
    }
    Ok(join_terms(items, false))
}

/// σ with Π corollas(parts) = σ · e_P.
fn product_sign(p: &LabeledPartition, n: u32, flavor: Flavor) -> Result<i8> {
    let mut prod = GraphVector::scalar(n, flavor, ChiScalar::one());
    for q in &p.parts {
        prod = prod.product(&GraphVector::corolla(n, flavor, &q.legs, q.label.clone()))?;
    }
    let r = reduce(&prod);
    match r.terms.get(p) {
        Some(c) if c.is_one() => Ok(1),
        Some(c) if (-c).is_one() => Ok(-1),
        _ => Err(Error::Precondition("partition is not a normal form".into())),
    }
}

fn graph_term_json(t: &crate::vector::Term, pointed: bool) -> serde_json::Value {
    let mut g = serde_json::to_value(t.graph.to_json()).expect("serializable");
    if pointed {
        g["external"] = json!(t.external.to_text());
    }
    g
}

/// Text form of a graph vector: one graph per term, each in compact JSON.
pub fn graph_vector_text(v: &GraphVector, mode: &ChiMode) -> Result<String> {
    let mut items = Vec::new();
    for (t, c) in v.terms() {
        let c = specialize(c, mode)?;
        if !c.is_zero() {
            items.push((c, graph_term_json(t, v.flavor().is_pointed()).to_string()));
        }
    }
    Ok(join_terms(items, false))
}

/// JSON form of a graph vector.
pub fn graph_vector_json(v: &GraphVector, mode: &ChiMode) -> Result<serde_json::Value> {
    let mut terms = Vec::new();
    for (t, c) in v.terms() {
        let c = specialize(c, mode)?;
        if !c.is_zero() {
            terms.push(json!({ "graph": graph_term_json(t, v.flavor().is_pointed()), "coeff": c.to_text() }));
        }
    }
    Ok(json!({ "n": v.n(), "flavor": v.flavor().name(), "legs": v.legs(), "terms": terms }))
}

//! Path notation `[v](t_1, ..., t_n)` with powers, truncation and indexed
//! families, parsed from an ASCII surface syntax.
//!
//! Grammar (whitespace is insignificant except between base-point factors):
//!
//! ```text
//! path    := ['[' vertex ']'] item (',' item)*
//! item    := atom ('^' exp | '#')*
//! atom    := ident ['_' sub] | '(' [item (',' item)*] ')' [family]
//! family  := '_{' ident '=' expr '}' '^' exp
//! exp     := int | '-' int | ident | '{' expr '}'
//! sub     := int | ident | '{' expr '}'
//! vertex  := 'e' | factor ((' ' | '*') factor)*
//! factor  := ident ['_' sub] ['^' exp]
//! expr    := integer arithmetic with + - * / (exact) // (floor), unary -,
//!            parentheses, implicit products such as `2i`, and `|s|` for
//!            the order of a bound generator
//! ```
//!
//! A negative exponent on a generator means its inverse repeated; on
//! anything else it is an error. `#` drops the last step of its operand.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::cayley::{split_top_level, CayleyGraph};
use crate::group::{AbelianGroup, GroupElement, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("negative exponent {0} on a compound expression")]
    NegativeExponent(i64),
    #[error("truncation applied to an empty expansion")]
    SharpOnEmpty,
    #[error("{0} is not divisible by {1}")]
    InexactDivision(i64, i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("arithmetic overflow")]
    Overflow,
    #[error("index {index} out of range for `{name}` of length {len}")]
    IndexOutOfRange { name: String, index: i64, len: usize },
    #[error("`{0}` is bound to a value of the wrong kind")]
    WrongKind(String),
    #[error("step {0} is not in the connection set")]
    StepNotInS(String),
    #[error("bad binding `{0}`")]
    BadBinding(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    FloorDiv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Var(String),
    /// `|s|`, the order of a bound generator.
    Order(String),
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexFactor {
    pub name: String,
    pub sub: Option<Expr>,
    pub exp: Option<Expr>,
}

/// A product of generator powers; empty means the identity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexExpr {
    pub factors: Vec<VertexFactor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathExpr {
    Gen { name: String, sub: Option<Expr> },
    Power(Box<PathExpr>, Expr),
    Sharp(Box<PathExpr>),
    Seq(Vec<PathExpr>),
    Family { body: Vec<PathExpr>, var: String, lower: Expr, upper: Expr },
    Based { base: VertexExpr, body: Box<PathExpr> },
}

// ---------------------------------------------------------------- parsing

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

type PResult<T> = Result<T, DslError>;

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(DslError::Syntax { pos: self.pos, msg: msg.into() })
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

    fn peek_raw(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_at(&self, off: usize) -> Option<u8> {
        self.src.get(self.pos + off).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        self.skip_ws();
        let start = self.pos;
        match self.peek_raw() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return self.err("expected identifier"),
        }
        while matches!(self.peek_raw(), Some(c) if c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn int(&mut self) -> PResult<i64> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .map_or_else(|| self.err("integer too large"), Ok)
    }

    fn path(&mut self) -> PResult<PathExpr> {
        let base = if self.eat(b'[') {
            let v = self.vertex()?;
            self.expect(b']')?;
            Some(v)
        } else {
            None
        };
        let mut items = vec![self.item()?];
        while self.eat(b',') {
            items.push(self.item()?);
        }
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        let body = PathExpr::Seq(items);
        Ok(match base {
            Some(base) => PathExpr::Based { base, body: Box::new(body) },
            None => body,
        })
    }

    fn item(&mut self) -> PResult<PathExpr> {
        let mut e = self.atom()?;
        loop {
            if self.eat(b'^') {
                e = PathExpr::Power(Box::new(e), self.exparg()?);
            } else if self.eat(b'#') {
                e = PathExpr::Sharp(Box::new(e));
            } else {
                return Ok(e);
            }
        }
    }

    fn atom(&mut self) -> PResult<PathExpr> {
        if self.eat(b'(') {
            let mut items = Vec::new();
            if !self.eat(b')') {
                items.push(self.item()?);
                while self.eat(b',') {
                    items.push(self.item()?);
                }
                self.expect(b')')?;
            }
            if self.peek_raw() == Some(b'_') {
                self.pos += 1;
                self.expect(b'{')?;
                let var = self.ident()?;
                self.expect(b'=')?;
                let lower = self.expr()?;
                self.expect(b'}')?;
                self.expect(b'^')?;
                let upper = self.exparg()?;
                return Ok(PathExpr::Family { body: items, var, lower, upper });
            }
            return Ok(PathExpr::Seq(items));
        }
        let name = self.ident()?;
        let sub = self.subscript()?;
        Ok(PathExpr::Gen { name, sub })
    }

    fn subscript(&mut self) -> PResult<Option<Expr>> {
        if self.peek_raw() != Some(b'_') {
            return Ok(None);
        }
        self.pos += 1;
        Ok(Some(self.simple_arg()?))
    }

    /// `int`, `ident`, or `{expr}`; used for subscripts.
    fn simple_arg(&mut self) -> PResult<Expr> {
        match self.peek() {
            Some(b'{') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b'}')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.int()?)),
            Some(c) if c.is_ascii_alphabetic() => Ok(Expr::Var(self.ident()?)),
            _ => self.err("expected subscript"),
        }
    }

    fn exparg(&mut self) -> PResult<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(Expr::Int(self.int()?))));
        }
        self.simple_arg()
    }

    fn vertex(&mut self) -> PResult<VertexExpr> {
        let mut factors = Vec::new();
        loop {
            match self.peek() {
                Some(b']') => break,
                Some(b'*') if !factors.is_empty() => {
                    self.pos += 1;
                    continue;
                }
                _ => {}
            }
            let name = self.ident()?;
            if name == "e" {
                continue;
            }
            let sub = self.subscript()?;
            let exp = if self.eat(b'^') { Some(self.exparg()?) } else { None };
            factors.push(VertexFactor { name, sub, exp });
        }
        Ok(VertexExpr { factors })
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => Op::Add,
                Some(b'-') => Op::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    Op::Mul
                }
                Some(b'/') if self.peek_at(1) == Some(b'/') => {
                    self.pos += 2;
                    Op::FloorDiv
                }
                Some(b'/') => {
                    self.pos += 1;
                    Op::Div
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' || c == b'|' => Op::Mul,
                _ => return Ok(lhs),
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'|') => {
                self.pos += 1;
                let name = self.ident()?;
                self.expect(b'|')?;
                Ok(Expr::Order(name))
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.int()?)),
            Some(c) if c.is_ascii_alphabetic() => Ok(Expr::Var(self.ident()?)),
            _ => self.err("expected expression"),
        }
    }
}

pub fn parse(text: &str) -> Result<PathExpr, DslError> {
    Parser { src: text.as_bytes(), pos: 0 }.path()
}

// -------------------------------------------------------------- rendering

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(Op::Add | Op::Sub, ..) => 1,
        Expr::Bin(..) => 2,
        Expr::Neg(_) => 3,
        _ => 4,
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |e: &Expr, need: u8| {
            if prec(e) < need {
                format!("({e})")
            } else {
                e.to_string()
            }
        };
        match self {
            Expr::Int(k) => write!(f, "{k}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Order(v) => write!(f, "|{v}|"),
            Expr::Neg(e) => write!(f, "-{}", wrap(e, 4)),
            Expr::Bin(op, a, b) => {
                let (sym, p) = match op {
                    Op::Add => ("+", 1),
                    Op::Sub => ("-", 1),
                    Op::Mul => ("*", 2),
                    Op::Div => ("/", 2),
                    Op::FloorDiv => ("//", 2),
                };
                write!(f, "{}{}{}", wrap(a, p), sym, wrap(b, p + 1))
            }
        }
    }
}

fn render_arg(e: &Expr) -> String {
    match e {
        Expr::Int(k) => k.to_string(),
        Expr::Var(v) => v.clone(),
        other => format!("{{{other}}}"),
    }
}

fn render_items(items: &[PathExpr]) -> String {
    items.iter().map(render_item).collect::<Vec<_>>().join(",")
}

fn render_item(e: &PathExpr) -> String {
    match e {
        PathExpr::Gen { name, sub } => match sub {
            Some(s) => format!("{name}_{}", render_arg(s)),
            None => name.clone(),
        },
        PathExpr::Power(inner, k) => format!("{}^{}", render_item(inner), render_arg(k)),
        PathExpr::Sharp(inner) => format!("{}#", render_item(inner)),
        PathExpr::Seq(items) => format!("({})", render_items(items)),
        PathExpr::Family { body, var, lower, upper } => {
            format!("({})_{{{var}={lower}}}^{}", render_items(body), render_arg(upper))
        }
        PathExpr::Based { .. } => render(e),
    }
}

impl fmt::Display for VertexExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|fa| {
                let mut s = fa.name.clone();
                if let Some(sub) = &fa.sub {
                    s += &format!("_{}", render_arg(sub));
                }
                if let Some(exp) = &fa.exp {
                    s += &format!("^{}", render_arg(exp));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Text that parses back to the same tree.
pub fn render(e: &PathExpr) -> String {
    match e {
        PathExpr::Based { base, body } => format!("[{base}]{}", render(body)),
        PathExpr::Seq(items) => render_items(items),
        other => render_item(other),
    }
}

// -------------------------------------------------------------- bindings

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    Int(i64),
    Gen(GroupElement),
    Seq(Vec<GroupElement>),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bindings {
    map: BTreeMap<String, Binding>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn int(mut self, name: &str, v: i64) -> Self {
        self.map.insert(name.to_string(), Binding::Int(v));
        self
    }

    pub fn gen(mut self, name: &str, g: GroupElement) -> Self {
        self.map.insert(name.to_string(), Binding::Gen(g));
        self
    }

    pub fn seq(mut self, name: &str, s: Vec<GroupElement>) -> Self {
        self.map.insert(name.to_string(), Binding::Seq(s));
        self
    }

    pub fn set(&mut self, name: &str, b: Binding) {
        self.map.insert(name.to_string(), b);
    }

    pub fn get(&self, name: &str) -> Option<&Binding> {
        self.map.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Binding)> {
        self.map.iter()
    }

    /// Parses `m=3,s=(1,0),t=[2,2,3]`. Plain integers bind as integers; in
    /// a cyclic group they may also stand for generators.
    pub fn parse(group: &AbelianGroup, text: &str) -> Result<Self, DslError> {
        let mut out = Bindings::new();
        for part in split_top_level(text) {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (k, v) = part.split_once('=').ok_or_else(|| DslError::BadBinding(part.to_string()))?;
            let (k, v) = (k.trim(), v.trim());
            let b = if let Some(inner) = v.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                let elems = split_top_level(inner)
                    .iter()
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| group.parse_element(s))
                    .collect::<Result<Vec<_>, _>>()?;
                Binding::Seq(elems)
            } else if v.starts_with('(') {
                Binding::Gen(group.parse_element(v)?)
            } else {
                Binding::Int(v.parse().map_err(|_| DslError::BadBinding(part.to_string()))?)
            };
            out.map.insert(k.to_string(), b);
        }
        Ok(out)
    }

    pub fn render(&self, group: &AbelianGroup) -> String {
        let parts: Vec<String> = self
            .map
            .iter()
            .map(|(k, v)| match v {
                Binding::Int(i) => format!("{k}={i}"),
                Binding::Gen(g) => format!("{k}={}", group.render_element(g)),
                Binding::Seq(s) => format!(
                    "{k}=[{}]",
                    s.iter().map(|g| group.render_element(g)).collect::<Vec<_>>().join(",")
                ),
            })
            .collect();
        parts.join(",")
    }
}

// ------------------------------------------------------------- evaluation

struct Env<'a> {
    bindings: &'a Bindings,
    group: Option<&'a AbelianGroup>,
    locals: Vec<(String, i64)>,
}

impl Env<'_> {
    fn int(&self, name: &str) -> Result<i64, DslError> {
        if let Some((_, v)) = self.locals.iter().rev().find(|(k, _)| k == name) {
            return Ok(*v);
        }
        match self.bindings.get(name) {
            Some(Binding::Int(v)) => Ok(*v),
            Some(_) => Err(DslError::WrongKind(name.to_string())),
            None => Err(DslError::UnboundSymbol(name.to_string())),
        }
    }

    fn eval(&self, e: &Expr) -> Result<i64, DslError> {
        Ok(match e {
            Expr::Int(k) => *k,
            Expr::Var(v) => self.int(v)?,
            Expr::Order(name) => {
                let group = self.group.ok_or_else(|| DslError::UnboundSymbol(format!("|{name}|")))?;
                let g = self.gen(name, None)?;
                group.element_order(&g)? as i64
            }
            Expr::Neg(a) => self.eval(a)?.checked_neg().ok_or(DslError::Overflow)?,
            Expr::Bin(op, a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                match op {
                    Op::Add => x.checked_add(y).ok_or(DslError::Overflow)?,
                    Op::Sub => x.checked_sub(y).ok_or(DslError::Overflow)?,
                    Op::Mul => x.checked_mul(y).ok_or(DslError::Overflow)?,
                    Op::Div | Op::FloorDiv if y == 0 => return Err(DslError::DivisionByZero),
                    Op::Div if x % y != 0 => return Err(DslError::InexactDivision(x, y)),
                    Op::Div => x / y,
                    Op::FloorDiv => Integer::div_floor(&x, &y),
                }
            }
        })
    }

    /// Resolves a generator symbol, with an optional 1-based sequence index.
    fn gen(&self, name: &str, index: Option<i64>) -> Result<GroupElement, DslError> {
        match self.bindings.get(name) {
            Some(Binding::Seq(seq)) => {
                let i = index.ok_or_else(|| DslError::WrongKind(name.to_string()))?;
                if i < 1 || i as usize > seq.len() {
                    return Err(DslError::IndexOutOfRange { name: name.to_string(), index: i, len: seq.len() });
                }
                Ok(seq[i as usize - 1].clone())
            }
            // A plain generator ignores subscripts: `t_i = t` for all i.
            Some(Binding::Gen(g)) => Ok(g.clone()),
            Some(Binding::Int(k)) => match self.group {
                Some(group) if group.rank() == 1 => Ok(group.reduce(&[*k])?),
                _ => Err(DslError::WrongKind(name.to_string())),
            },
            None => Err(DslError::UnboundSymbol(name.to_string())),
        }
    }
}

/// A step before resolution: `name_index`, possibly inverted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymStep {
    pub name: String,
    pub index: Option<i64>,
    pub inverse: bool,
}

impl SymStep {
    fn inverted(&self) -> Self {
        Self { inverse: !self.inverse, ..self.clone() }
    }
}

impl fmt::Display for SymStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if let Some(i) = self.index {
            write!(f, "_{i}")?;
        }
        if self.inverse {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

/// Base point as `(name, index, exponent)` factors, and the step list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicWalk {
    pub base: Vec<(String, Option<i64>, i64)>,
    pub steps: Vec<SymStep>,
}

/// A walk `[base](steps...)` with steps resolved to group elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Walk {
    pub base: GroupElement,
    pub steps: Vec<GroupElement>,
}

impl Walk {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `base, base+t_1, base+t_1+t_2, ...`, including the final vertex.
    pub fn vertices(&self, group: &AbelianGroup) -> Vec<GroupElement> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut cur = self.base.clone();
        out.push(cur.clone());
        for s in &self.steps {
            cur = group.add(&cur, s);
            out.push(cur.clone());
        }
        out
    }

    pub fn end(&self, group: &AbelianGroup) -> GroupElement {
        self.steps.iter().fold(self.base.clone(), |acc, s| group.add(&acc, s))
    }

    /// The same cycle traversed backwards from its end point.
    pub fn reversed(&self, group: &AbelianGroup) -> Walk {
        Walk { base: self.end(group), steps: self.steps.iter().rev().map(|s| group.neg(s)).collect() }
    }

    pub fn translated(&self, group: &AbelianGroup, v: &GroupElement) -> Walk {
        Walk { base: group.add(&self.base, v), steps: self.steps.clone() }
    }

    /// Builds a walk from a vertex-index sequence of a graph.
    pub fn from_vertices(x: &CayleyGraph, verts: &[usize]) -> Walk {
        let g = x.group();
        let steps = verts
            .windows(2)
            .map(|w| g.sub(&x.vertex(w[1]), &x.vertex(w[0])))
            .collect();
        Walk { base: x.vertex(verts[0]), steps }
    }

    pub fn render(&self, group: &AbelianGroup) -> String {
        let steps: Vec<String> = self.steps.iter().map(|s| group.render_element(s)).collect();
        format!("[{}]({})", group.render_element(&self.base), steps.join(","))
    }
}

fn expand_generic<T: Clone>(
    e: &PathExpr,
    env: &mut Env<'_>,
    atom: &dyn Fn(&Env<'_>, &str, Option<i64>) -> Result<T, DslError>,
    invert: &dyn Fn(&T) -> T,
    out: &mut Vec<T>,
) -> Result<(), DslError> {
    match e {
        PathExpr::Gen { name, sub } => {
            let idx = sub.as_ref().map(|s| env.eval(s)).transpose()?;
            out.push(atom(env, name, idx)?);
        }
        PathExpr::Power(inner, k) => {
            let k = env.eval(k)?;
            if k < 0 {
                let PathExpr::Gen { name, sub } = inner.as_ref() else {
                    return Err(DslError::NegativeExponent(k));
                };
                let idx = sub.as_ref().map(|s| env.eval(s)).transpose()?;
                let step = invert(&atom(env, name, idx)?);
                out.extend(std::iter::repeat_n(step, k.unsigned_abs() as usize));
            } else {
                let mut once = Vec::new();
                expand_generic(inner, env, atom, invert, &mut once)?;
                for _ in 0..k {
                    out.extend(once.iter().cloned());
                }
            }
        }
        PathExpr::Sharp(inner) => {
            let mut once = Vec::new();
            expand_generic(inner, env, atom, invert, &mut once)?;
            if once.pop().is_none() {
                return Err(DslError::SharpOnEmpty);
            }
            out.extend(once);
        }
        PathExpr::Seq(items) => {
            for it in items {
                expand_generic(it, env, atom, invert, out)?;
            }
        }
        PathExpr::Family { body, var, lower, upper } => {
            let (lo, hi) = (env.eval(lower)?, env.eval(upper)?);
            for i in lo..=hi {
                env.locals.push((var.clone(), i));
                let r = body.iter().try_for_each(|it| expand_generic(it, env, atom, invert, out));
                env.locals.pop();
                r?;
            }
        }
        PathExpr::Based { body, .. } => expand_generic(body, env, atom, invert, out)?,
    }
    Ok(())
}

fn split_base(e: &PathExpr) -> (Option<&VertexExpr>, &PathExpr) {
    match e {
        PathExpr::Based { base, body } => (Some(base), body),
        other => (None, other),
    }
}

/// Expansion with steps left as symbols; `t_i` stays `t_1`, `t_2`, ... when
/// `t` is unbound.
pub fn expand_symbolic(
    e: &PathExpr,
    bindings: &Bindings,
    group: Option<&AbelianGroup>,
) -> Result<SymbolicWalk, DslError> {
    let mut env = Env { bindings, group, locals: vec![] };
    let (base, body) = split_base(e);
    let mut steps = Vec::new();
    let atom = |_: &Env<'_>, name: &str, index: Option<i64>| {
        Ok(SymStep { name: name.to_string(), index, inverse: false })
    };
    expand_generic(body, &mut env, &atom, &|s: &SymStep| s.inverted(), &mut steps)?;
    let base = match base {
        Some(v) => v
            .factors
            .iter()
            .map(|f| {
                let idx = f.sub.as_ref().map(|s| env.eval(s)).transpose()?;
                let exp = f.exp.as_ref().map(|x| env.eval(x)).transpose()?.unwrap_or(1);
                Ok((f.name.clone(), idx, exp))
            })
            .collect::<Result<_, DslError>>()?,
        None => vec![],
    };
    Ok(SymbolicWalk { base, steps })
}

/// Resolves a symbolic expansion against bindings.
pub fn resolve(sym: &SymbolicWalk, bindings: &Bindings, group: &AbelianGroup) -> Result<Walk, DslError> {
    let env = Env { bindings, group: Some(group), locals: vec![] };
    let mut base = group.identity();
    for (name, idx, exp) in &sym.base {
        base = group.add(&base, &group.scale(*exp, &env.gen(name, *idx)?));
    }
    let steps = sym
        .steps
        .iter()
        .map(|s| {
            let g = env.gen(&s.name, s.index)?;
            Ok(if s.inverse { group.neg(&g) } else { g })
        })
        .collect::<Result<_, DslError>>()?;
    Ok(Walk { base, steps })
}

/// Expansion that resolves each generator as it is reached.
pub fn expand(e: &PathExpr, bindings: &Bindings, group: &AbelianGroup) -> Result<Walk, DslError> {
    let mut env = Env { bindings, group: Some(group), locals: vec![] };
    let (base_expr, body) = split_base(e);
    let mut steps = Vec::new();
    let atom = |env: &Env<'_>, name: &str, index: Option<i64>| env.gen(name, index);
    expand_generic(body, &mut env, &atom, &|g: &GroupElement| group.neg(g), &mut steps)?;
    let mut base = group.identity();
    if let Some(v) = base_expr {
        for f in &v.factors {
            let idx = f.sub.as_ref().map(|s| env.eval(s)).transpose()?;
            let exp = f.exp.as_ref().map(|x| env.eval(x)).transpose()?.unwrap_or(1);
            base = group.add(&base, &group.scale(exp, &env.gen(&f.name, idx)?));
        }
    }
    Ok(Walk { base, steps })
}

/// Parses and expands in one call.
pub fn expand_text(text: &str, bindings: &Bindings, group: &AbelianGroup) -> Result<Walk, DslError> {
    expand(&parse(text)?, bindings, group)
}

/// Evaluates an integer expression under bindings.
pub fn eval_expr(text: &str, bindings: &Bindings, group: Option<&AbelianGroup>) -> Result<i64, DslError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Env { bindings, group, locals: vec![] }.eval(&e)
}

/// Evaluates a base-point expression such as `s^{-2} t^{n-1}`.
pub fn eval_vertex(text: &str, bindings: &Bindings, group: &AbelianGroup) -> Result<GroupElement, DslError> {
    let wrapped = format!("[{text}]");
    let mut p = Parser { src: wrapped.as_bytes(), pos: 0 };
    p.expect(b'[')?;
    let v = p.vertex()?;
    p.expect(b']')?;
    let env = Env { bindings, group: Some(group), locals: vec![] };
    let mut base = group.identity();
    for f in &v.factors {
        let idx = f.sub.as_ref().map(|s| env.eval(s)).transpose()?;
        let exp = f.exp.as_ref().map(|x| env.eval(x)).transpose()?.unwrap_or(1);
        base = group.add(&base, &group.scale(exp, &env.gen(&f.name, idx)?));
    }
    Ok(base)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WalkKind {
    Path,
    Cycle,
    HamiltonianCycle,
    NotSimple,
}

impl fmt::Display for WalkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Vertex indices visited by `w` (including the endpoint), after checking
/// that every step is in `S`.
pub fn walk_vertices(x: &CayleyGraph, w: &Walk) -> Result<Vec<usize>, DslError> {
    let g = x.group();
    g.validate(&w.base)?;
    let mut cur = x.index(&w.base);
    let mut out = vec![cur];
    for s in &w.steps {
        let k = x.gen_index(s).ok_or_else(|| DslError::StepNotInS(g.render_element(s)))?;
        cur = x.step(cur, k);
        out.push(cur);
    }
    Ok(out)
}

pub fn classify_walk(x: &CayleyGraph, w: &Walk) -> Result<WalkKind, DslError> {
    let verts = walk_vertices(x, w)?;
    let closed = verts.first() == verts.last();
    let interior = if closed { &verts[..verts.len() - 1] } else { &verts[..] };
    let mut seen = vec![false; x.order()];
    for &v in interior {
        if std::mem::replace(&mut seen[v], true) {
            return Ok(WalkKind::NotSimple);
        }
    }
    if !closed || w.is_empty() {
        return Ok(WalkKind::Path);
    }
    if w.len() < 3 {
        return Ok(WalkKind::NotSimple);
    }
    if w.len() == x.order() {
        Ok(WalkKind::HamiltonianCycle)
    } else {
        Ok(WalkKind::Cycle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(text: &str) -> Vec<String> {
        let e = parse(text).unwrap();
        expand_symbolic(&e, &Bindings::new(), None).unwrap().steps.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn golden_notation_examples() {
        assert_eq!(sym("(s^2,t)^3#,u"), ["s", "s", "t", "s", "s", "t", "s", "s", "u"]);
        assert_eq!(sym("((s^2,t)^0,u)"), ["u"]);
        assert_eq!(
            sym("((s^2,t_i)_{i=1}^3,u,(s^2,t_i)_{i=1}^0,u)"),
            ["s", "s", "t_1", "s", "s", "t_2", "s", "s", "t_3", "u", "u"]
        );
    }

    #[test]
    fn powers_and_sharp() {
        assert_eq!(sym("s^3"), ["s", "s", "s"]);
        assert_eq!(sym("(s,t)^2#"), ["s", "t", "s"]);
        assert_eq!(sym("t^{-2}"), ["t^-1", "t^-1"]);
        let e = parse("(s,t)^{-1}").unwrap();
        assert_eq!(expand_symbolic(&e, &Bindings::new(), None), Err(DslError::NegativeExponent(-1)));
        let e = parse("(s^0)#").unwrap();
        assert_eq!(expand_symbolic(&e, &Bindings::new(), None), Err(DslError::SharpOnEmpty));
        let e = parse("s^n").unwrap();
        assert_eq!(expand_symbolic(&e, &Bindings::new(), None), Err(DslError::UnboundSymbol("n".into())));
    }

    #[test]
    fn simplified_cycle_example() {
        let e = parse("((t^{2},s,t^{-2},s))^{1}").unwrap();
        let steps: Vec<String> =
            expand_symbolic(&e, &Bindings::new(), None).unwrap().steps.iter().map(|s| s.to_string()).collect();
        assert_eq!(steps, ["t", "t", "s", "t^-1", "t^-1", "s"]);
    }

    #[test]
    fn arithmetic() {
        let b = Bindings::new().int("r", 3).int("n", 7);
        assert_eq!(eval_expr("(r-1)/2", &b, None), Ok(1));
        assert_eq!(eval_expr("r/2", &b, None), Err(DslError::InexactDivision(3, 2)));
        assert_eq!(eval_expr("(n-2)//2", &b, None), Ok(2));
        assert_eq!(eval_expr("2r-1", &b, None), Ok(5));
        assert_eq!(eval_expr("-(n-1)", &b, None), Ok(-6));
        let z = AbelianGroup::new(&[12]).unwrap();
        let b = b.gen("s", z.element(&[3]).unwrap());
        assert_eq!(eval_expr("|s|-2", &b, Some(&z)), Ok(2));
    }

    #[test]
    fn render_roundtrip() {
        for text in [
            "(s^2,t)^3#,u",
            "((s^2,t)^0,u)",
            "((s^2,t_i)_{i=1}^3,u,(s^2,t_i)_{i=1}^0,u)",
            "[s^{-2} t^{n-1}](s,t^{-1},s^{-1})",
            "((s^{m-1},t_{2i-1},s^{-(m-1)},t_{2i})_{i=1}^{r/2})",
            "(t^{(|s|-2)//2},s^{-(n-r-1)})",
            "[e](s)",
        ] {
            let a = parse(text).unwrap();
            let b = parse(&render(&a)).unwrap();
            assert_eq!(a, b, "{text} -> {}", render(&a));
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse("(s,t") {
            Err(DslError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse("s^").is_err());
        assert!(parse("s,,t").is_err());
    }

    #[test]
    fn classify_walk_examples() {
        let x = CayleyGraph::parse("Z7", "1,6").unwrap();
        let g = x.group();
        let s = g.element(&[1]).unwrap();
        let w = Walk { base: g.identity(), steps: vec![s.clone(); 7] };
        assert_eq!(classify_walk(&x, &w), Ok(WalkKind::HamiltonianCycle));
        let back = Walk { base: g.identity(), steps: vec![s.clone(), g.neg(&s)] };
        assert_eq!(classify_walk(&x, &back), Ok(WalkKind::NotSimple));
        let bad = Walk { base: g.identity(), steps: vec![g.element(&[2]).unwrap()] };
        assert!(matches!(classify_walk(&x, &bad), Err(DslError::StepNotInS(_))));
        let path = Walk { base: g.identity(), steps: vec![s.clone(); 3] };
        assert_eq!(classify_walk(&x, &path), Ok(WalkKind::Path));
    }

    #[test]
    fn mobius_two_layers_is_hamiltonian() {
        for n in 2..=5i64 {
            let x = CayleyGraph::from_parts(&[2, 2 * n as u64], &[&[0, n], &[0, 1], &[0, -1], &[1, 0]]).unwrap();
            let g = x.group();
            let b = Bindings::new()
                .int("n", n)
                .gen("s", g.reduce(&[0, n]).unwrap())
                .gen("t", g.reduce(&[0, 1]).unwrap())
                .gen("u", g.reduce(&[1, 0]).unwrap());
            let w = expand_text("((s,t)^n#,u,(s,t^{-1})^n#,u)", &b, g).unwrap();
            assert_eq!(classify_walk(&x, &w), Ok(WalkKind::HamiltonianCycle), "n={n}");
        }
    }

    #[test]
    fn sequence_bindings() {
        let g = AbelianGroup::new(&[5]).unwrap();
        let seq: Vec<_> = [1, 2, 3].iter().map(|&k| g.reduce(&[k]).unwrap()).collect();
        let b = Bindings::new().seq("t", seq);
        let w = expand_text("(t_i)_{i=1}^3,t_{2}^{-1}", &b, &g).unwrap();
        let got: Vec<u64> = w.steps.iter().map(|s| s.coords()[0]).collect();
        assert_eq!(got, [1, 2, 3, 3]);
        let err = expand_text("t_4", &b, &g).unwrap_err();
        assert!(matches!(err, DslError::IndexOutOfRange { index: 4, .. }));
    }

    #[test]
    fn binding_parse() {
        let g = AbelianGroup::new(&[2, 6]).unwrap();
        let b = Bindings::parse(&g, "m=3, s=(1,0), t=[(0,1),(0,5)]").unwrap();
        assert_eq!(b.get("m"), Some(&Binding::Int(3)));
        assert_eq!(b.get("s"), Some(&Binding::Gen(g.element(&[1, 0]).unwrap())));
        assert!(matches!(b.get("t"), Some(Binding::Seq(v)) if v.len() == 2));
    }
}

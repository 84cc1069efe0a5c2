//! Subtraction-free expression trees and their tropical shadows.
//!
//! [`PosExpr`] is a formula built from strictly positive constants,
//! variables, `+`, `*`, and `/`. Because subtraction never appears, every
//! such tree has a well-defined tropicalization: replace `*` by `+`, `/` by
//! `-`, `+` by `max`, and every constant by `0`. [`tropicalize`] performs
//! exactly that rewrite and nothing else, so whatever identities are proved
//! for the rational evaluation can be transported to the piecewise-linear
//! side mechanically.
//!
//! The smart constructors flatten nested sums/products, drop unit factors,
//! and fold constant subtrees. Each of those rewrites is simultaneously an
//! identity of rational arithmetic and of (max, +) arithmetic, so they never
//! change either semantics.

use num::{BigRational, One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::{rational_to_text, Scalar};

/// Variable universe: the deformation parameter `c` and coordinates `x_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    C,
    X(usize),
}

impl std::fmt::Display for Var {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Var::C => write!(f, "c"),
            Var::X(k) => write!(f, "x{k}"),
        }
    }
}

/// A subtraction-free formula. Constants are strictly positive by
/// construction; sums and products carry two or more operands.
#[derive(Debug, Clone, PartialEq)]
pub enum PosExpr {
    Const(BigRational),
    Var(Var),
    Sum(Vec<PosExpr>),
    Prod(Vec<PosExpr>),
    Quot(Box<PosExpr>, Box<PosExpr>),
}

impl PosExpr {
    pub fn constant(v: BigRational) -> Self {
        assert!(v.is_positive(), "PosExpr constants must be positive, got {v}");
        PosExpr::Const(v)
    }

    pub fn int(v: i64) -> Self {
        Self::constant(BigRational::from_integer(v.into()))
    }

    pub fn var(v: Var) -> Self {
        PosExpr::Var(v)
    }

    pub fn x(k: usize) -> Self {
        PosExpr::Var(Var::X(k))
    }

    pub fn c() -> Self {
        PosExpr::Var(Var::C)
    }

    /// n-ary sum; flattens nested sums and folds constants together.
    pub fn sum(terms: Vec<PosExpr>) -> Self {
        assert!(!terms.is_empty(), "empty sum");
        let mut flat = Vec::with_capacity(terms.len());
        let mut konst: Option<BigRational> = None;
        for t in terms {
            match t {
                PosExpr::Sum(inner) => {
                    for u in inner {
                        match u {
                            PosExpr::Const(v) => add_const(&mut konst, v),
                            other => flat.push(other),
                        }
                    }
                }
                PosExpr::Const(v) => add_const(&mut konst, v),
                other => flat.push(other),
            }
        }
        if let Some(v) = konst {
            flat.push(PosExpr::Const(v));
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            PosExpr::Sum(flat)
        }
    }

    /// n-ary product; flattens, folds constants, and drops unit factors.
    pub fn prod(factors: Vec<PosExpr>) -> Self {
        assert!(!factors.is_empty(), "empty product");
        let mut flat = Vec::with_capacity(factors.len());
        let mut konst: Option<BigRational> = None;
        for t in factors {
            match t {
                PosExpr::Prod(inner) => {
                    for u in inner {
                        match u {
                            PosExpr::Const(v) => mul_const(&mut konst, v),
                            other => flat.push(other),
                        }
                    }
                }
                PosExpr::Const(v) => mul_const(&mut konst, v),
                other => flat.push(other),
            }
        }
        match konst {
            Some(v) if !v.is_one() || flat.is_empty() => flat.push(PosExpr::Const(v)),
            _ => {}
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            PosExpr::Prod(flat)
        }
    }

    pub fn quot(num: PosExpr, den: PosExpr) -> Self {
        if let PosExpr::Const(d) = &den {
            if d.is_one() {
                return num;
            }
        }
        PosExpr::Quot(Box::new(num), Box::new(den))
    }

    /// All variables occurring in the tree, sorted and deduplicated.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            PosExpr::Const(_) => {}
            PosExpr::Var(v) => out.push(*v),
            PosExpr::Sum(ts) | PosExpr::Prod(ts) => {
                for t in ts {
                    t.collect_vars(out);
                }
            }
            PosExpr::Quot(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

fn add_const(slot: &mut Option<BigRational>, v: BigRational) {
    *slot = Some(match slot.take() {
        Some(old) => old + v,
        None => v,
    });
}

fn mul_const(slot: &mut Option<BigRational>, v: BigRational) {
    *slot = Some(match slot.take() {
        Some(old) => old * v,
        None => v,
    });
}

impl std::fmt::Display for PosExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PosExpr::Const(v) => write!(f, "{}", rational_to_text(v)),
            PosExpr::Var(v) => write!(f, "{v}"),
            PosExpr::Sum(ts) => write_joined(f, ts, " + "),
            PosExpr::Prod(ts) => write_joined(f, ts, " * "),
            PosExpr::Quot(a, b) => write!(f, "({a} / {b})"),
        }
    }
}

fn write_joined<T: std::fmt::Display>(
    f: &mut std::fmt::Formatter<'_>,
    items: &[T],
    sep: &str,
) -> std::fmt::Result {
    write!(f, "(")?;
    for (i, t) in items.iter().enumerate() {
        if i > 0 {
            write!(f, "{sep}")?;
        }
        write!(f, "{t}")?;
    }
    write!(f, ")")
}

/// PosExpr forms a subtraction-free scalar domain: sums and products of
/// positive expressions stay positive, so division is always defined and
/// `is_zero` is identically false.
impl Scalar for PosExpr {
    fn one() -> Self {
        PosExpr::Const(One::one())
    }

    fn is_zero(&self) -> bool {
        false
    }

    fn add(&self, rhs: &Self) -> Self {
        PosExpr::sum(vec![self.clone(), rhs.clone()])
    }

    fn mul(&self, rhs: &Self) -> Self {
        PosExpr::prod(vec![self.clone(), rhs.clone()])
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(PosExpr::quot(self.clone(), rhs.clone()))
    }

    fn text(&self) -> String {
        self.to_string()
    }
}

/// A (max, +) formula: the image of a [`PosExpr`] under tropicalization,
/// or one built directly from the piecewise-linear side.
#[derive(Debug, Clone, PartialEq)]
pub enum TropExpr {
    Const(i64),
    Var(Var),
    Max(Vec<TropExpr>),
    Plus(Vec<TropExpr>),
    Minus(Box<TropExpr>, Box<TropExpr>),
}

impl TropExpr {
    pub fn constant(v: i64) -> Self {
        TropExpr::Const(v)
    }

    pub fn var(v: Var) -> Self {
        TropExpr::Var(v)
    }

    pub fn x(k: usize) -> Self {
        TropExpr::Var(Var::X(k))
    }

    pub fn c() -> Self {
        TropExpr::Var(Var::C)
    }

    pub fn maxn(terms: Vec<TropExpr>) -> Self {
        assert!(!terms.is_empty(), "empty max");
        let mut flat = Vec::with_capacity(terms.len());
        for t in terms {
            match t {
                TropExpr::Max(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            TropExpr::Max(flat)
        }
    }

    pub fn plus(terms: Vec<TropExpr>) -> Self {
        assert!(!terms.is_empty(), "empty tropical product");
        let mut flat = Vec::with_capacity(terms.len());
        let mut konst = 0i64;
        let mut saw_const = false;
        for t in terms {
            match t {
                TropExpr::Plus(inner) => {
                    for u in inner {
                        match u {
                            TropExpr::Const(v) => {
                                konst += v;
                                saw_const = true;
                            }
                            other => flat.push(other),
                        }
                    }
                }
                TropExpr::Const(v) => {
                    konst += v;
                    saw_const = true;
                }
                other => flat.push(other),
            }
        }
        if (saw_const && konst != 0) || flat.is_empty() {
            flat.push(TropExpr::Const(konst));
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            TropExpr::Plus(flat)
        }
    }

    pub fn minus(a: TropExpr, b: TropExpr) -> Self {
        if let TropExpr::Const(0) = b {
            return a;
        }
        TropExpr::Minus(Box::new(a), Box::new(b))
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            TropExpr::Const(_) => {}
            TropExpr::Var(v) => out.push(*v),
            TropExpr::Max(ts) | TropExpr::Plus(ts) => {
                for t in ts {
                    t.collect_vars(out);
                }
            }
            TropExpr::Minus(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl std::fmt::Display for TropExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TropExpr::Const(v) => write!(f, "{v}"),
            TropExpr::Var(v) => write!(f, "{v}"),
            TropExpr::Max(ts) => {
                write!(f, "max(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            TropExpr::Plus(ts) => write_joined(f, ts, " + "),
            TropExpr::Minus(a, b) => write!(f, "({a} - {b})"),
        }
    }
}

/// The mechanical rewrite: constants to 0, `+` to `max`, `*` to `+`,
/// `/` to `-`. No other transformation is applied.
pub fn tropicalize(e: &PosExpr) -> TropExpr {
    match e {
        PosExpr::Const(_) => TropExpr::Const(0),
        PosExpr::Var(v) => TropExpr::Var(*v),
        PosExpr::Sum(ts) => TropExpr::maxn(ts.iter().map(tropicalize).collect()),
        PosExpr::Prod(ts) => TropExpr::plus(ts.iter().map(tropicalize).collect()),
        PosExpr::Quot(a, b) => TropExpr::minus(tropicalize(a), tropicalize(b)),
    }
}

/// Values for the variables an expression may mention. Backed by a plain
/// vector indexed by coordinate number, so lookups inside the big sampling
/// loops stay cheap.
#[derive(Debug, Clone)]
pub struct Bindings<V> {
    c: Option<V>,
    x: Vec<Option<V>>,
}

impl<V: Clone> Bindings<V> {
    /// Room for coordinates x_1 ..= x_max_index.
    pub fn new(max_index: usize) -> Self {
        Bindings {
            c: None,
            x: vec![None; max_index + 1],
        }
    }

    pub fn set_c(&mut self, v: V) {
        self.c = Some(v);
    }

    pub fn set_x(&mut self, k: usize, v: V) {
        if k >= self.x.len() {
            self.x.resize(k + 1, None);
        }
        self.x[k] = Some(v);
    }

    pub fn set(&mut self, var: Var, v: V) {
        match var {
            Var::C => self.set_c(v),
            Var::X(k) => self.set_x(k, v),
        }
    }

    pub fn get(&self, var: Var) -> Result<&V> {
        let slot = match var {
            Var::C => self.c.as_ref(),
            Var::X(k) => self.x.get(k).and_then(|s| s.as_ref()),
        };
        slot.ok_or_else(|| Error::MissingBinding(var.to_string()))
    }
}

pub fn eval_pos(e: &PosExpr, b: &Bindings<BigRational>) -> Result<BigRational> {
    match e {
        PosExpr::Const(v) => Ok(v.clone()),
        PosExpr::Var(v) => b.get(*v).cloned(),
        PosExpr::Sum(ts) => {
            let mut acc = BigRational::zero();
            for t in ts {
                acc += eval_pos(t, b)?;
            }
            Ok(acc)
        }
        PosExpr::Prod(ts) => {
            let mut acc: BigRational = One::one();
            for t in ts {
                acc *= eval_pos(t, b)?;
            }
            Ok(acc)
        }
        PosExpr::Quot(x, y) => {
            let den = eval_pos(y, b)?;
            if Zero::is_zero(&den) {
                return Err(Error::DivisionByZero);
            }
            Ok(eval_pos(x, b)? / den)
        }
    }
}

pub fn eval_trop(e: &TropExpr, b: &Bindings<i64>) -> Result<i64> {
    match e {
        TropExpr::Const(v) => Ok(*v),
        TropExpr::Var(v) => b.get(*v).copied(),
        TropExpr::Max(ts) => {
            let mut best = i64::MIN;
            for t in ts {
                best = best.max(eval_trop(t, b)?);
            }
            Ok(best)
        }
        TropExpr::Plus(ts) => {
            let mut acc = 0i64;
            for t in ts {
                acc += eval_trop(t, b)?;
            }
            Ok(acc)
        }
        TropExpr::Minus(a, c) => Ok(eval_trop(a, b)? - eval_trop(c, b)?),
    }
}

/// Outcome of comparing two tropical expressions over a region.
#[derive(Debug, Clone)]
pub enum TropCompare {
    Equal { points: u64 },
    Mismatch { at: Vec<(Var, i64)>, lhs: i64, rhs: i64 },
}

impl TropCompare {
    pub fn is_equal(&self) -> bool {
        matches!(self, TropCompare::Equal { .. })
    }
}

/// Compares `lhs` and `rhs` at every integer point of the box
/// `[lo, hi]^vars`. Errors with [`Error::ResourceCap`] when the grid would
/// exceed `cap` points.
pub fn trop_equal_on_box(
    lhs: &TropExpr,
    rhs: &TropExpr,
    vars: &[Var],
    lo: i64,
    hi: i64,
    cap: u64,
) -> Result<TropCompare> {
    assert!(lo <= hi);
    let width = (hi - lo + 1) as u64;
    let mut total: u64 = 1;
    for _ in vars {
        total = total
            .checked_mul(width)
            .filter(|&t| t <= cap)
            .ok_or_else(|| {
                Error::ResourceCap(format!(
                    "box [{lo},{hi}]^{} exceeds {cap} evaluation points",
                    vars.len()
                ))
            })?;
    }
    let mut b = Bindings::new(max_coord(vars));
    let mut counter = vec![lo; vars.len()];
    for (v, &val) in vars.iter().zip(&counter) {
        b.set(*v, val);
    }
    let mut seen = 0u64;
    loop {
        seen += 1;
        let l = eval_trop(lhs, &b)?;
        let r = eval_trop(rhs, &b)?;
        if l != r {
            let at = vars.iter().copied().zip(counter.iter().copied()).collect();
            return Ok(TropCompare::Mismatch { at, lhs: l, rhs: r });
        }
        // Odometer increment over the box.
        let mut pos = vars.len();
        loop {
            if pos == 0 {
                return Ok(TropCompare::Equal { points: seen });
            }
            pos -= 1;
            if counter[pos] < hi {
                counter[pos] += 1;
                b.set(vars[pos], counter[pos]);
                break;
            }
            counter[pos] = lo;
            b.set(vars[pos], lo);
        }
    }
}

/// Compares `lhs` and `rhs` at `count` uniform random integer points of
/// `[lo, hi]^vars`.
pub fn trop_equal_on_sample<R: Rng>(
    lhs: &TropExpr,
    rhs: &TropExpr,
    vars: &[Var],
    lo: i64,
    hi: i64,
    count: u64,
    rng: &mut R,
) -> Result<TropCompare> {
    assert!(lo <= hi);
    let mut b = Bindings::new(max_coord(vars));
    for _ in 0..count {
        let mut point = Vec::with_capacity(vars.len());
        for v in vars {
            let val = rng.gen_range(lo..=hi);
            b.set(*v, val);
            point.push(val);
        }
        let l = eval_trop(lhs, &b)?;
        let r = eval_trop(rhs, &b)?;
        if l != r {
            let at = vars.iter().copied().zip(point).collect();
            return Ok(TropCompare::Mismatch { at, lhs: l, rhs: r });
        }
    }
    Ok(TropCompare::Equal { points: count })
}

fn max_coord(vars: &[Var]) -> usize {
    vars.iter()
        .map(|v| match v {
            Var::C => 0,
            Var::X(k) => *k,
        })
        .max()
        .unwrap_or(0)
}

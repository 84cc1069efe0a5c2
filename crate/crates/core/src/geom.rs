//! Birational torus actions on the charts cut out by the vectors of
//! [`crate::fundrep`], together with their weight and string functions.
//!
//! Everything here is exact rational arithmetic. The closed forms for the
//! actions and functions are written once, generically over [`Scalar`], so
//! the rational evaluators and the symbolic expression catalog cannot drift
//! apart. Independent word-product formulas serve as oracles inside the
//! verification suites.

use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cartan::CartanData;
use crate::error::{Error, Result};
use crate::expr::PosExpr;
use crate::fundrep;
use crate::scalar::{
    is_positive_rational, random_pos_rational, random_pos_rational_ne, rational_from_text,
    rational_one, rational_to_text, rational_zero, Scalar,
};

/// A point of the rank-n torus (C^*)^{2n-2}.
///
/// The same struct backs both charts: the first chart reads the coordinates
/// as x_2..x_{2n-1} (see [`TorusPoint::x`]), the second as y_1..y_{2n-2}
/// (see [`TorusPoint::y`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusPoint {
    n: usize,
    coords: Vec<BigRational>,
}

impl TorusPoint {
    pub fn new(n: usize, coords: Vec<BigRational>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRank(n));
        }
        if coords.len() != 2 * n - 2 {
            return Err(Error::Domain(format!(
                "expected {} coordinates for rank {}, got {}",
                2 * n - 2,
                n,
                coords.len()
            )));
        }
        Ok(TorusPoint { n, coords })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// First-chart coordinate x_k, 2 <= k <= 2n-1.
    pub fn x(&self, k: usize) -> &BigRational {
        assert!((2..=2 * self.n - 1).contains(&k), "x index {k} out of range");
        &self.coords[k - 2]
    }

    /// First-chart coordinate with the boundary convention x_1 = x_{2n} = 1.
    pub fn xcb(&self, k: usize) -> BigRational {
        if k == 1 || k == 2 * self.n {
            rational_one()
        } else {
            self.x(k).clone()
        }
    }

    /// Second-chart coordinate y_k, 1 <= k <= 2n-2.
    pub fn y(&self, k: usize) -> &BigRational {
        assert!((1..=2 * self.n - 2).contains(&k), "y index {k} out of range");
        &self.coords[k - 1]
    }

    /// Second-chart coordinate with the boundary convention y_{2n-1} = 1.
    pub fn ycb(&self, k: usize) -> BigRational {
        if k == 2 * self.n - 1 {
            rational_one()
        } else {
            self.y(k).clone()
        }
    }

    pub fn require_nonzero(&self) -> Result<()> {
        if self.coords.iter().any(|c| c.is_zero()) {
            return Err(Error::SingularPoint);
        }
        Ok(())
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(is_positive_rational)
    }

    pub fn random_positive<R: Rng>(n: usize, rng: &mut R) -> Self {
        let coords = (0..2 * n - 2).map(|_| random_pos_rational(rng)).collect();
        TorusPoint { n, coords }
    }

    /// Parses "p/q,p/q,..." into a point of the given rank.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let coords = text
            .split(',')
            .map(rational_from_text)
            .collect::<Result<Vec<_>>>()?;
        TorusPoint::new(n, coords)
    }

    pub fn text(&self) -> String {
        self.coords
            .iter()
            .map(rational_to_text)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "x": self.coords.iter().map(rational_to_text).collect::<Vec<_>>(),
        })
    }
}

/// Zero denominators encountered while evaluating at a rational point mean
/// the point lies outside the chart; report that rather than a bare division
/// error.
fn singular(e: Error) -> Error {
    match e {
        Error::DivisionByZero => Error::SingularPoint,
        other => other,
    }
}

fn check_node(i: usize, n: usize) -> Result<()> {
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Closed forms, generic over the scalar type.
//
// The chart accessor must implement the boundary conventions x_1 = x_{2n} = 1.
// All sums below are nonempty within the index ranges used, so the same code
// builds positive expression trees and evaluates rational points.
// ---------------------------------------------------------------------------

/// Multiplicative weight function gamma_i.
pub fn gamma_form<S: Scalar>(n: usize, i: usize, x: &dyn Fn(usize) -> S) -> Result<S> {
    check_node(i, n)?;
    if i == 0 {
        return S::one().div(&x(n).mul(&x(n + 1)));
    }
    if i == 1 {
        let num = x(n + 1).mul(&x(n + 1));
        return num.div(&x(2).mul(&x(n + 2)));
    }
    if i == n {
        let num = x(n).mul(&x(n));
        return num.div(&x(n - 1).mul(&x(2 * n - 1)));
    }
    let num = x(i).mul(&x(i)).mul(&x(n + i)).mul(&x(n + i));
    let den = x(i - 1)
        .mul(&x(i + 1))
        .mul(&x(n + i - 1))
        .mul(&x(n + i + 1));
    num.div(&den)
}

/// String function eps_i.
pub fn eps_form<S: Scalar>(n: usize, i: usize, x: &dyn Fn(usize) -> S) -> Result<S> {
    check_node(i, n)?;
    if i == 0 {
        // x_{n+1} * (x_2/x_{n+1} + x_3/x_{n+2} + ... + x_n/x_{2n-1})
        let mut acc = x(2).div(&x(n + 1))?;
        for t in 3..=n {
            acc = acc.add(&x(t).div(&x(n + t - 1))?);
        }
        return Ok(x(n + 1).mul(&acc));
    }
    if i == 1 {
        return x(n + 2).div(&x(n + 1));
    }
    if i == n {
        return x(2 * n - 1).div(&x(n));
    }
    // x_{n+i+1}/x_{n+i} + x_{i+1} x_{n+i-1} x_{n+i+1} / (x_i x_{n+i}^2)
    let first = x(n + i + 1).div(&x(n + i))?;
    let num = x(i + 1).mul(&x(n + i - 1)).mul(&x(n + i + 1));
    let den = x(i).mul(&x(n + i)).mul(&x(n + i));
    Ok(first.add(&num.div(&den)?))
}

/// The rescaling scalar of the one-parameter action at a middle node
/// 2 <= i <= n-1.
pub fn c_mid_form<S: Scalar>(n: usize, i: usize, c: &S, x: &dyn Fn(usize) -> S) -> Result<S> {
    debug_assert!((2..=n - 1).contains(&i));
    let main = x(i).mul(&x(n + i));
    let cross = x(i + 1).mul(&x(n + i - 1));
    let num = c.mul(&main.add(&cross));
    let den = c.mul(&main).add(&cross);
    num.div(&den)
}

/// Coordinate k of the one-parameter action at node i, for 2 <= k <= 2n-1.
pub fn e_coord_form<S: Scalar>(
    n: usize,
    i: usize,
    c: &S,
    k: usize,
    x: &dyn Fn(usize) -> S,
) -> Result<S> {
    check_node(i, n)?;
    if !(2..=2 * n - 1).contains(&k) {
        return Err(Error::IndexOutOfRange { index: k, max: 2 * n - 1 });
    }
    if i == 1 {
        return Ok(if k == n + 1 { c.mul(&x(k)) } else { x(k) });
    }
    if i == n {
        return Ok(if k == n { c.mul(&x(k)) } else { x(k) });
    }
    if i != 0 {
        // Middle node: only coordinates i and n+i move.
        if k == i {
            return Ok(c_mid_form(n, i, c, x)?.mul(&x(k)));
        }
        if k == n + i {
            let ci = c_mid_form(n, i, c, x)?;
            return Ok(c.div(&ci)?.mul(&x(k)));
        }
        return Ok(x(k));
    }
    // Node 0. Ratio sums: prefix(m) = sum_{t=2..m} x_t/x_{n+t-1},
    // suffix(m) = sum_{t=m+1..n} x_t/x_{n+t-1}. Both are nonempty in the
    // ranges below, so the construction stays inside positive expressions.
    let ratio = |t: usize| -> Result<S> { x(t).div(&x(n + t - 1)) };
    let prefix = |m: usize| -> Result<S> {
        let mut acc = ratio(2)?;
        for t in 3..=m {
            acc = acc.add(&ratio(t)?);
        }
        Ok(acc)
    };
    let suffix = |m: usize| -> Result<S> {
        let mut acc = ratio(m + 1)?;
        for t in (m + 2)..=n {
            acc = acc.add(&ratio(t)?);
        }
        Ok(acc)
    };
    if k == n || k == n + 1 {
        return x(k).div(c);
    }
    let total = prefix(n)?;
    if k < n {
        // x_k * total / (c * prefix(k) + suffix(k))
        let den = c.mul(&prefix(k)?).add(&suffix(k)?);
        return x(k).mul(&total).div(&den);
    }
    // k = n + l with 2 <= l <= n-1: x_k * (c * prefix(l) + suffix(l)) / (c * total)
    let l = k - n;
    let num = c.mul(&prefix(l)?).add(&suffix(l)?);
    x(k).mul(&num).div(&c.mul(&total))
}

// ---------------------------------------------------------------------------
// Rational evaluation on the first chart.
// ---------------------------------------------------------------------------

pub fn geom_gamma(i: usize, pt: &TorusPoint) -> Result<BigRational> {
    pt.require_nonzero()?;
    gamma_form(pt.n(), i, &|k| pt.xcb(k)).map_err(singular)
}

pub fn geom_eps(i: usize, pt: &TorusPoint) -> Result<BigRational> {
    pt.require_nonzero()?;
    eps_form(pt.n(), i, &|k| pt.xcb(k)).map_err(singular)
}

pub fn geom_e(i: usize, c: &BigRational, pt: &TorusPoint) -> Result<TorusPoint> {
    pt.require_nonzero()?;
    if c.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let n = pt.n();
    check_node(i, n)?;
    let coords = (2..=2 * n - 1)
        .map(|k| e_coord_form(n, i, c, k, &|k| pt.xcb(k)).map_err(singular))
        .collect::<Result<Vec<_>>>()?;
    TorusPoint::new(n, coords)
}

// ---------------------------------------------------------------------------
// The change of charts and the second-chart operators.
// ---------------------------------------------------------------------------

/// Ratio tail sums T_m = sum_{t=m+1..n} x_t/x_{n+t-1} for m = 0..n (T_n = 0).
fn tail_sums(x: &TorusPoint) -> Vec<BigRational> {
    let n = x.n();
    let mut tails = vec![rational_zero(); n + 1];
    for m in (0..n).rev() {
        let t = m + 1;
        let term = if t >= 2 {
            x.x(t) / x.x(n + t - 1)
        } else {
            // t = 1 never contributes: the chart has no x_1 ratio.
            rational_zero()
        };
        tails[m] = &tails[m + 1] + term;
    }
    tails
}

/// Change of charts: reads `x` in the first chart, returns the matching
/// second-chart point. Multiplies the chart vector by 1/x_n.
#[allow(clippy::needless_range_loop)] // indices mirror the subscripts below
pub fn sigma_bar(x: &TorusPoint) -> Result<TorusPoint> {
    x.require_nonzero()?;
    let n = x.n();
    let tails = tail_sums(x);
    for t in tails[1..n].iter() {
        if t.is_zero() {
            return Err(Error::SingularPoint);
        }
    }
    let one = rational_one();
    let mut coords = Vec::with_capacity(2 * n - 2);
    // y_1 = 1/T_1, y_k = x_k/T_k for 2 <= k <= n-1, y_n = 1/x_n,
    // y_{n+l} = (x_{n+l}/x_n) T_l for 1 <= l <= n-2.
    coords.push(&one / &tails[1]);
    for k in 2..=n - 1 {
        coords.push(x.x(k) / &tails[k]);
    }
    coords.push(&one / x.x(n));
    for l in 1..=n.saturating_sub(2) {
        coords.push(x.x(n + l) / x.x(n) * &tails[l]);
    }
    TorusPoint::new(n, coords)
}

/// Inverse change of charts: reads `y` in the second chart, returns the
/// matching first-chart point.
#[allow(clippy::needless_range_loop)] // indices mirror the subscripts below
pub fn sigma_bar_inv(y: &TorusPoint) -> Result<TorusPoint> {
    y.require_nonzero()?;
    let n = y.n();
    // S_k = sum_{t=1..k} y_t/y_{n+t-1}; the t = 1 term is y_1/y_n.
    let mut heads = vec![rational_zero(); n];
    for k in 1..=n - 1 {
        heads[k] = &heads[k - 1] + y.y(k) / y.y(n + k - 1);
    }
    for h in heads[1..].iter() {
        if h.is_zero() {
            return Err(Error::SingularPoint);
        }
    }
    let one = rational_one();
    let mut coords = Vec::with_capacity(2 * n - 2);
    // x_k = (y_k/y_n)/S_k for 2 <= k <= n-1, x_n = 1/y_n,
    // x_{n+l} = y_{n+l} S_l for 1 <= l <= n-2, x_{2n-1} = S_{n-1}.
    for k in 2..=n - 1 {
        coords.push(y.y(k) / y.y(n) / &heads[k]);
    }
    coords.push(&one / y.y(n));
    for l in 1..=n.saturating_sub(2) {
        coords.push(y.y(n + l) * &heads[l]);
    }
    coords.push(heads[n - 1].clone());
    TorusPoint::new(n, coords)
}

/// The zero-node one-parameter action in the second chart: scales y_n by c.
pub fn e0_bar(c: &BigRational, y: &TorusPoint) -> Result<TorusPoint> {
    y.require_nonzero()?;
    if c.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let n = y.n();
    let mut coords = y.coords().to_vec();
    coords[n - 1] = &coords[n - 1] * c;
    TorusPoint::new(n, coords)
}

/// Multiplicative weight at node 0 in the second chart:
/// y_n^2 / (y_1 y_{n+1}), with the boundary convention y_{2n-1} = 1.
pub fn gamma0_bar(y: &TorusPoint) -> Result<BigRational> {
    y.require_nonzero()?;
    let n = y.n();
    Ok(y.y(n) * y.y(n) / (y.y(1) * y.ycb(n + 1)))
}

/// String function at node 0 in the second chart: y_{n+1}/y_n with the
/// boundary convention y_{2n-1} = 1.
pub fn eps0_bar(y: &TorusPoint) -> Result<BigRational> {
    y.require_nonzero()?;
    let n = y.n();
    Ok(y.ycb(n + 1) / y.y(n))
}

/// The zero-node action computed by conjugating the second-chart action
/// with the change of charts. Must agree with `geom_e(0, ..)` identically.
pub fn geom_e0_via_conjugation(c: &BigRational, x: &TorusPoint) -> Result<TorusPoint> {
    sigma_bar_inv(&e0_bar(c, &sigma_bar(x)?)?)
}

// ---------------------------------------------------------------------------
// Word-product formulas, used as independent oracles.
// ---------------------------------------------------------------------------

/// Prefix monomials D_m of a decorated word: D_m is the product of
/// c_r^{a(i_r, i)} over r < m, times c_m.
fn prefix_monomials(
    cd: &CartanData,
    letters: &[usize],
    params: &[BigRational],
    i: usize,
) -> Result<Vec<BigRational>> {
    let mut out = Vec::with_capacity(letters.len());
    let mut running = rational_one();
    for (kr, cr) in letters.iter().zip(params.iter()) {
        if cr.is_zero() {
            return Err(Error::SingularPoint);
        }
        out.push(&running * cr);
        running *= cr.powi(cd.a(*kr, i))?;
    }
    Ok(out)
}

/// Multiplicative weight of a decorated word at node i:
/// the product of c_m^{a(i_m, i)}.
pub fn schubert_gamma(
    cd: &CartanData,
    letters: &[usize],
    params: &[BigRational],
    i: usize,
) -> Result<BigRational> {
    check_node(i, cd.rank())?;
    let mut acc = rational_one();
    for (km, cm) in letters.iter().zip(params.iter()) {
        if cm.is_zero() {
            return Err(Error::SingularPoint);
        }
        acc *= cm.powi(cd.a(*km, i))?;
    }
    Ok(acc)
}

/// String function of a decorated word at node i: the sum of 1/D_m over the
/// positions carrying letter i.
pub fn schubert_eps(
    cd: &CartanData,
    letters: &[usize],
    params: &[BigRational],
    i: usize,
) -> Result<BigRational> {
    check_node(i, cd.rank())?;
    let d = prefix_monomials(cd, letters, params, i)?;
    let mut acc = rational_zero();
    let mut seen = false;
    for (m, km) in letters.iter().enumerate() {
        if *km == i {
            seen = true;
            if d[m].is_zero() {
                return Err(Error::SingularPoint);
            }
            acc += rational_one() / &d[m];
        }
    }
    if !seen {
        return Err(Error::Domain(format!("letter {i} does not occur in the word")));
    }
    Ok(acc)
}

/// One-parameter action at node i on the parameters of a decorated word.
pub fn schubert_e(
    cd: &CartanData,
    letters: &[usize],
    params: &[BigRational],
    i: usize,
    c: &BigRational,
) -> Result<Vec<BigRational>> {
    check_node(i, cd.rank())?;
    if c.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if !letters.contains(&i) {
        return Err(Error::Domain(format!("letter {i} does not occur in the word")));
    }
    let d = prefix_monomials(cd, letters, params, i)?;
    // occ[j] = sum of 1/D_m over m <= j with letter i; total = occ at the end.
    let mut occ = Vec::with_capacity(letters.len());
    let mut acc = rational_zero();
    for (m, km) in letters.iter().enumerate() {
        if *km == i {
            if d[m].is_zero() {
                return Err(Error::SingularPoint);
            }
            acc += rational_one() / &d[m];
        }
        occ.push(acc.clone());
    }
    let total = acc;
    let mut out = Vec::with_capacity(params.len());
    for (j, cj) in params.iter().enumerate() {
        let le = occ[j].clone();
        let lt = if j == 0 { rational_zero() } else { occ[j - 1].clone() };
        let num = c * &le + (&total - &le);
        let den = c * &lt + (&total - &lt);
        if den.is_zero() {
            return Err(Error::SingularPoint);
        }
        out.push(cj * num / den);
    }
    Ok(out)
}

/// Decorated word of the first chart: letters and parameters, leftmost first.
pub fn v1_word_params(x: &TorusPoint) -> (Vec<usize>, Vec<BigRational>) {
    let n = x.n();
    let letters = fundrep::v1_letters(n);
    let params = (1..=letters.len())
        .map(|m| x.x(fundrep::v1_param_index(n, m)).clone())
        .collect();
    (letters, params)
}

/// Decorated word of the second chart.
pub fn v2_word_params(y: &TorusPoint) -> (Vec<usize>, Vec<BigRational>) {
    let n = y.n();
    let letters = fundrep::v2_letters(n);
    let params = (1..=letters.len())
        .map(|m| y.y(fundrep::v2_param_index(n, m)).clone())
        .collect();
    (letters, params)
}

fn v2_params_to_point(n: usize, params: Vec<BigRational>) -> Result<TorusPoint> {
    // Parameter m carries y_{2n-1-m}, so y_k sits at position 2n-2-k.
    let mut coords = vec![rational_zero(); 2 * n - 2];
    for (idx, value) in params.into_iter().enumerate() {
        let m = idx + 1;
        coords[2 * n - 2 - m] = value;
    }
    TorusPoint::new(n, coords)
}

/// One-parameter action at node i on the second chart, computed through the
/// word-product formula. Defined for 0 <= i <= n-1.
pub fn e_bar(i: usize, c: &BigRational, y: &TorusPoint) -> Result<TorusPoint> {
    let n = y.n();
    if i > n - 1 {
        return Err(Error::IndexOutOfRange { index: i, max: n - 1 });
    }
    y.require_nonzero()?;
    let cd = CartanData::new(n)?;
    let (letters, params) = v2_word_params(y);
    let moved = schubert_e(&cd, &letters, &params, i, c)?;
    v2_params_to_point(n, moved)
}

// ---------------------------------------------------------------------------
// Symbolic catalog.
// ---------------------------------------------------------------------------

/// Names a closed-form expression: a weight function, a string function, or
/// one coordinate of a one-parameter action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogTarget {
    Gamma(usize),
    Eps(usize),
    ECoord(usize, usize),
}

impl std::fmt::Display for CatalogTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CatalogTarget::Gamma(i) => write!(f, "gamma{i}"),
            CatalogTarget::Eps(i) => write!(f, "eps{i}"),
            CatalogTarget::ECoord(i, k) => write!(f, "e{i}:{k}"),
        }
    }
}

impl std::str::FromStr for CatalogTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown catalog target: {s}"));
        if let Some(rest) = s.strip_prefix("gamma") {
            return rest.parse().map(CatalogTarget::Gamma).map_err(|_| bad());
        }
        if let Some(rest) = s.strip_prefix("eps") {
            return rest.parse().map(CatalogTarget::Eps).map_err(|_| bad());
        }
        if let Some(rest) = s.strip_prefix('e') {
            let (i, k) = rest.split_once(':').ok_or_else(bad)?;
            let i = i.parse().map_err(|_| bad())?;
            let k = k.parse().map_err(|_| bad())?;
            return Ok(CatalogTarget::ECoord(i, k));
        }
        Err(bad())
    }
}

fn sym_chart(n: usize) -> impl Fn(usize) -> PosExpr {
    move |k: usize| {
        if k == 1 || k == 2 * n {
            PosExpr::int(1)
        } else {
            PosExpr::x(k)
        }
    }
}

/// Builds the subtraction-free expression for one catalog target at rank n.
/// Action coordinates use the parameter variable `c`.
pub fn catalog_entry(n: usize, target: CatalogTarget) -> Result<PosExpr> {
    CartanData::new(n)?;
    let chart = sym_chart(n);
    match target {
        CatalogTarget::Gamma(i) => gamma_form(n, i, &chart),
        CatalogTarget::Eps(i) => eps_form(n, i, &chart),
        CatalogTarget::ECoord(i, k) => e_coord_form(n, i, &PosExpr::c(), k, &chart),
    }
}

/// The symbolic rescaling scalar at a middle node 2 <= i <= n-1.
pub fn catalog_c_mid(n: usize, i: usize) -> Result<PosExpr> {
    CartanData::new(n)?;
    if !(2..=n.saturating_sub(1)).contains(&i) {
        return Err(Error::IndexOutOfRange { index: i, max: n - 1 });
    }
    c_mid_form(n, i, &PosExpr::c(), &sym_chart(n))
}

/// Every catalog target at rank n, in a fixed deterministic order.
pub fn catalog_targets(n: usize) -> Vec<CatalogTarget> {
    let mut out = Vec::new();
    for i in 0..=n {
        out.push(CatalogTarget::Gamma(i));
    }
    for i in 0..=n {
        out.push(CatalogTarget::Eps(i));
    }
    for i in 0..=n {
        for k in 2..=2 * n - 1 {
            out.push(CatalogTarget::ECoord(i, k));
        }
    }
    out
}

/// Named evaluation shared by the command line and the C interface.
/// `gammaI` and `epsI` report a rational value; `eI` applies the action
/// and reports the moved point. The parameter text is required exactly
/// for the actions.
pub fn eval_action(
    n: usize,
    point: &str,
    action: &str,
    c: Option<&str>,
) -> Result<serde_json::Value> {
    let pt = TorusPoint::parse(n, point)?;
    let index = |rest: &str| -> Result<usize> {
        rest.parse()
            .map_err(|_| Error::Parse(format!("bad action index in {action:?}")))
    };
    if let Some(rest) = action.strip_prefix("gamma") {
        let value = geom_gamma(index(rest)?, &pt)?;
        return Ok(serde_json::json!({
            "n": n,
            "action": action,
            "point": pt.text(),
            "value": rational_to_text(&value),
        }));
    }
    if let Some(rest) = action.strip_prefix("eps") {
        let value = geom_eps(index(rest)?, &pt)?;
        return Ok(serde_json::json!({
            "n": n,
            "action": action,
            "point": pt.text(),
            "value": rational_to_text(&value),
        }));
    }
    if let Some(rest) = action.strip_prefix('e') {
        let i = index(rest)?;
        let raw = c.ok_or_else(|| Error::Parse(format!("action {action} needs a parameter")))?;
        let c = rational_from_text(raw)?;
        let moved = geom_e(i, &c, &pt)?;
        return Ok(serde_json::json!({
            "n": n,
            "action": action,
            "c": rational_to_text(&c),
            "point": pt.text(),
            "result": moved.to_json(),
        }));
    }
    Err(Error::Parse(format!(
        "unknown action {action:?}; expected gammaI, epsI, or eI"
    )))
}

// ---------------------------------------------------------------------------
// Verification suites.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Axioms,
    Lemma41,
    SigmaCommute,
    Eq43,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Lemma41 => "lemma41",
            Suite::SigmaCommute => "sigma-commute",
            Suite::Eq43 => "eq43",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "axioms" => Ok(Suite::Axioms),
            "lemma41" => Ok(Suite::Lemma41),
            "sigma-commute" => Ok(Suite::SigmaCommute),
            "eq43" => Ok(Suite::Eq43),
            other => Err(Error::Parse(format!("unknown suite: {other}"))),
        }
    }
}

const MAX_WITNESSES: usize = 25;

#[derive(Debug, Clone, Serialize)]
pub struct GeomFailure {
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct GeomReport {
    pub suite: String,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub checks_run: u64,
    pub failure_count: u64,
    pub failures: Vec<GeomFailure>,
}

impl GeomReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    fn record(&mut self, ok: bool, check: &str, detail: impl FnOnce() -> String) {
        self.checks_run += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < MAX_WITNESSES {
                self.failures.push(GeomFailure {
                    check: check.to_string(),
                    detail: detail(),
                });
            }
        }
    }
}

/// Runs one verification suite with seeded random positive points.
pub fn verify_suite(suite: Suite, n: usize, trials: u64, seed: u64) -> Result<GeomReport> {
    let cd = CartanData::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = GeomReport {
        suite: suite.name().to_string(),
        n,
        trials,
        seed,
        checks_run: 0,
        failure_count: 0,
        failures: Vec::new(),
    };
    for _ in 0..trials {
        let x = TorusPoint::random_positive(n, &mut rng);
        match suite {
            Suite::Axioms => axioms_trial(&cd, &x, &mut rng, &mut report)?,
            Suite::Lemma41 => lemma41_trial(&x, &mut rng, &mut report)?,
            Suite::SigmaCommute => sigma_commute_trial(&x, &mut rng, &mut report)?,
            Suite::Eq43 => eq43_trial(&x, &mut rng, &mut report)?,
        }
    }
    Ok(report)
}

fn axioms_trial(
    cd: &CartanData,
    x: &TorusPoint,
    rng: &mut ChaCha8Rng,
    rep: &mut GeomReport,
) -> Result<()> {
    let n = cd.rank();
    let c = random_pos_rational(rng);
    let c1 = random_pos_rational(rng);
    let c2 = random_pos_rational(rng);
    let ctx = || format!("x=({}) c=({}) c1=({}) c2=({})", x.text(), c, c1, c2);

    // One-parameter composition e_i^c1 e_i^c2 = e_i^{c1 c2}.
    for i in 0..=n {
        let lhs = geom_e(i, &c1, &geom_e(i, &c2, x)?)?;
        let rhs = geom_e(i, &(&c1 * &c2), x)?;
        rep.record(lhs == rhs, "compose", || format!("i={i} {}", ctx()));
    }

    // Weight transport gamma_j(e_i^c x) = c^{a(i,j)} gamma_j(x).
    for i in 0..=n {
        let moved = geom_e(i, &c, x)?;
        for j in 0..=n {
            let lhs = geom_gamma(j, &moved)?;
            let rhs = geom_gamma(j, x)? * c.powi(cd.a(i, j))?;
            rep.record(lhs == rhs, "gamma-transport", || format!("i={i} j={j} {}", ctx()));
        }
    }

    // Rank-two relations: commuting nodes and the length-three braid move.
    for i in 0..=n {
        for j in (i + 1)..=n {
            match cd.a(i, j) {
                0 => {
                    let lhs = geom_e(i, &c1, &geom_e(j, &c2, x)?)?;
                    let rhs = geom_e(j, &c2, &geom_e(i, &c1, x)?)?;
                    rep.record(lhs == rhs, "commute", || format!("i={i} j={j} {}", ctx()));
                }
                -1 => {
                    let c12 = &c1 * &c2;
                    let lhs = geom_e(i, &c1, &geom_e(j, &c12, &geom_e(i, &c2, x)?)?)?;
                    let rhs = geom_e(j, &c2, &geom_e(i, &c12, &geom_e(j, &c1, x)?)?)?;
                    rep.record(lhs == rhs, "braid", || format!("i={i} j={j} {}", ctx()));
                }
                _ => unreachable!("off-diagonal entries are 0 or -1"),
            }
        }
    }

    // String function laws: eps_i(e_i^c x) = eps_i(x)/c, and invariance
    // under actions at nodes not joined to i.
    for i in 0..=n {
        let moved = geom_e(i, &c, x)?;
        let lhs = geom_eps(i, &moved)?;
        let rhs = geom_eps(i, x)? / &c;
        rep.record(lhs == rhs, "eps-scale", || format!("i={i} {}", ctx()));
        for j in 0..=n {
            if j != i && cd.a(i, j) == 0 {
                let inv = geom_eps(j, &moved)?;
                rep.record(inv == geom_eps(j, x)?, "eps-invariant", || {
                    format!("i={i} j={j} {}", ctx())
                });
            }
        }
    }

    // The zero-node action agrees with its chart-conjugated definition, and
    // the zero-node functions agree with their second-chart definitions.
    let direct = geom_e(0, &c, x)?;
    let conj = geom_e0_via_conjugation(&c, x)?;
    rep.record(direct == conj, "zero-action-conjugation", ctx);
    let y = sigma_bar(x)?;
    rep.record(
        geom_gamma(0, x)? == gamma0_bar(&y)?,
        "gamma0-chart",
        ctx,
    );
    rep.record(geom_eps(0, x)? == eps0_bar(&y)?, "eps0-chart", ctx);
    Ok(())
}

fn lemma41_trial(x: &TorusPoint, rng: &mut ChaCha8Rng, rep: &mut GeomReport) -> Result<()> {
    let n = x.n();
    let y = sigma_bar(x)?;
    let v2 = fundrep::build_v2(&y)?;
    let v1 = fundrep::build_v1(x)?;
    let scale = rational_one() / x.x(n);
    rep.record(v2 == v1.scale(&scale), "chart-vector-match", || {
        format!("x=({})", x.text())
    });
    rep.record(sigma_bar_inv(&y)? == *x, "chart-roundtrip", || {
        format!("x=({})", x.text())
    });
    let z = TorusPoint::random_positive(n, rng);
    rep.record(
        sigma_bar(&sigma_bar_inv(&z)?)? == z,
        "chart-roundtrip-reverse",
        || format!("y=({})", z.text()),
    );
    Ok(())
}

fn sigma_commute_trial(x: &TorusPoint, rng: &mut ChaCha8Rng, rep: &mut GeomReport) -> Result<()> {
    let n = x.n();
    let c = random_pos_rational(rng);
    for i in 1..=n - 1 {
        let lhs = sigma_bar(&geom_e(i, &c, x)?)?;
        let rhs = e_bar(i, &c, &sigma_bar(x)?)?;
        rep.record(lhs == rhs, "chart-equivariance", || {
            format!("i={i} x=({}) c=({})", x.text(), c)
        });
    }
    Ok(())
}

fn eq43_trial(x: &TorusPoint, rng: &mut ChaCha8Rng, rep: &mut GeomReport) -> Result<()> {
    let n = x.n();
    if n < 4 {
        return Ok(());
    }
    let one = rational_one();
    let c = random_pos_rational_ne(rng, &one);
    let moved = geom_e(0, &c, x)?;
    // prefix[m] = sum_{t=2..m} x_t/x_{n+t-1}; tails from the shared helper.
    let tails = tail_sums(x);
    let total = tails[0].clone();
    let mut prefix = vec![rational_zero(); n + 1];
    for m in 1..=n {
        prefix[m] = &total - &tails[m];
    }
    for k in 3..=n - 1 {
        let lhs = moved.x(k) / moved.x(k + n - 1);
        let d1 = &c * &prefix[k - 1] + &tails[k - 1];
        let d2 = &c * &prefix[k] + &tails[k];
        if d1.is_zero() || d2.is_zero() {
            return Err(Error::SingularPoint);
        }
        let factor = &c * &total * &total / (&c - &one);
        let rhs = factor * (&one / d1 - &one / d2);
        rep.record(lhs == rhs, "zero-action-ratio", || {
            format!("k={k} x=({}) c=({})", x.text(), c)
        });
    }
    Ok(())
}

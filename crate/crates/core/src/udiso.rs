//! Piecewise-linear crystal on the coordinate lattice, and the explicit
//! isomorphism onto the limit-level two-row crystal.
//!
//! Points carry integer coordinates x_2..x_{2n-1}; the boundary values
//! x_1 and x_{2n} are fixed at 0. Weight and string functions, and the
//! parameterized action ud_e, are the tropicalizations (times -> plus,
//! quotients -> minus, sums -> max, constants -> 0) of the closed-form
//! rational expressions on the torus chart. The mechanical suite checks
//! exactly that: it rewrites the shared symbolic catalog and compares
//! against the direct implementations below at every sampled point.
//!
//! The map omega reads a lattice point as consecutive differences and
//! produces a row-sum-zero two-row array; verify_iso confirms it
//! intertwines every operator and transports the string data.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cartan::CartanData;
use crate::error::{Error, Result};
use crate::expr::{eval_trop, tropicalize, Bindings, TropExpr};
use crate::geom::{catalog_entry, catalog_targets, CatalogTarget};
use crate::pcrystal::{self, CrystalElt, Level};

/// A point of the rank-n coordinate lattice, coordinates x_2..x_{2n-1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePoint {
    n: usize,
    x: Vec<i64>,
}

impl LatticePoint {
    pub fn new(n: usize, x: Vec<i64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRank(n));
        }
        if x.len() != 2 * n - 2 {
            return Err(Error::InvalidElement(format!(
                "expected {} coordinates, got {}",
                2 * n - 2,
                x.len()
            )));
        }
        Ok(LatticePoint { n, x })
    }

    pub fn origin(n: usize) -> Result<Self> {
        LatticePoint::new(n, vec![0; 2 * n - 2])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[i64] {
        &self.x
    }

    /// Coordinate x_k, 2 <= k <= 2n-1.
    pub fn x_at(&self, k: usize) -> i64 {
        assert!(
            (2..=2 * self.n - 1).contains(&k),
            "coordinate index {k} out of range"
        );
        self.x[k - 2]
    }

    /// Coordinate with the zero boundary: x_1 = x_{2n} = 0.
    pub fn xb(&self, k: usize) -> i64 {
        if k == 1 || k == 2 * self.n {
            0
        } else {
            self.x_at(k)
        }
    }

    /// beta_k = x_k - x_{n+k-1}, defined for 2 <= k <= n.
    pub fn beta(&self, k: usize) -> i64 {
        assert!((2..=self.n).contains(&k), "beta index {k} out of range");
        self.x_at(k) - self.x_at(self.n + k - 1)
    }

    /// Parses "c2,c3,..." with exactly 2n-2 entries.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let coords: Vec<i64> = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Parse(format!("bad coordinate {t:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        LatticePoint::new(n, coords)
    }

    pub fn text(&self) -> String {
        self.x
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("point serialization cannot fail")
    }
}

fn check_node(i: usize, n: usize) -> Result<()> {
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    Ok(())
}

/// Weight coordinate at node i: the tropical form of the torus weight.
pub fn ud_wt(i: usize, p: &LatticePoint) -> Result<i64> {
    let n = p.n();
    check_node(i, n)?;
    let x = |k: usize| p.xb(k);
    Ok(match i {
        0 => -x(n) - x(n + 1),
        1 => -x(2) + 2 * x(n + 1) - x(n + 2),
        i if i == n => -x(n - 1) + 2 * x(n) - x(2 * n - 1),
        _ => -x(i - 1) + 2 * x(i) - x(i + 1) - x(n + i - 1) + 2 * x(n + i) - x(n + i + 1),
    })
}

/// String function at node i: the tropical form of the torus string
/// function.
pub fn ud_eps(i: usize, p: &LatticePoint) -> Result<i64> {
    let n = p.n();
    check_node(i, n)?;
    let x = |k: usize| p.xb(k);
    Ok(match i {
        0 => x(n + 1) + (2..=n).map(|k| p.beta(k)).max().expect("nonempty"),
        1 => -x(n + 1) + x(n + 2),
        i if i == n => -x(n) + x(2 * n - 1),
        _ => {
            let linear = x(n + i + 1) - x(n + i);
            let bent = -x(i) + x(i + 1) + x(n + i - 1) - 2 * x(n + i) + x(n + i + 1);
            linear.max(bent)
        }
    })
}

pub fn ud_phi(i: usize, p: &LatticePoint) -> Result<i64> {
    Ok(ud_wt(i, p)? + ud_eps(i, p)?)
}

/// The node-i action with additive parameter c. ud_e(i, 0, .) is the
/// identity and parameters add under composition; the one-step operators
/// are c = 1 (raising) and c = -1 (lowering).
pub fn ud_e(i: usize, c: i64, p: &LatticePoint) -> Result<LatticePoint> {
    let n = p.n();
    check_node(i, n)?;
    let mut x = p.x.clone();
    let idx = |k: usize| k - 2;
    match i {
        1 => x[idx(n + 1)] += c,
        i if i == n => x[idx(n)] += c,
        0 => {
            let top = (2..=n).map(|j| p.beta(j)).max().expect("nonempty");
            // C_k = max_j beta_j - max(max_{j<=k}(c+beta_j), max_{j>k} beta_j)
            let cap = |k: usize| -> i64 {
                let left = (2..=k).map(|j| c + p.beta(j)).max().expect("nonempty");
                let right = (k + 1..=n).map(|j| p.beta(j)).max().expect("nonempty");
                top - left.max(right)
            };
            for k in 2..n {
                x[idx(k)] += cap(k);
            }
            x[idx(n)] -= c;
            x[idx(n + 1)] -= c;
            for l in 2..n {
                x[idx(n + l)] += -c - cap(l);
            }
        }
        _ => {
            let straight = p.x_at(i) + p.x_at(n + i);
            let crossed = p.x_at(i + 1) + p.x_at(n + i - 1);
            let cbar = c + straight.max(crossed) - (c + straight).max(crossed);
            x[idx(i)] += cbar;
            x[idx(n + i)] += c - cbar;
        }
    }
    LatticePoint::new(n, x)
}

fn bump(p: &LatticePoint, k: usize, delta: i64) -> LatticePoint {
    let mut x = p.x.clone();
    x[k - 2] += delta;
    LatticePoint {
        n: p.n,
        x,
    }
}

/// Site 2 <= j <= n where the zero-node lowering acts: beta_j must weakly
/// dominate everything to its left and strictly dominate everything to its
/// right. Exactly one site qualifies, and it is the rightmost maximum of
/// (beta_2..beta_n); the scan asserts that equivalence.
fn zero_lowering_site(p: &LatticePoint) -> usize {
    let n = p.n();
    let mut found = Vec::new();
    for j in 2..=n {
        let left_ok = (2..j).all(|k| p.beta(k) <= p.beta(j));
        let right_ok = (j + 1..=n).all(|k| p.beta(j) > p.beta(k));
        if left_ok && right_ok {
            found.push(j);
        }
    }
    assert_eq!(found.len(), 1, "zero-node site must be unique, got {found:?}");
    let site = found[0];
    let top = (2..=n).map(|k| p.beta(k)).max().expect("nonempty");
    let argmax = (2..=n).rev().find(|&k| p.beta(k) == top).unwrap();
    assert_eq!(site, argmax, "scan disagrees with the argmax characterization");
    site
}

/// One-step raising at node i, by the displayed single-coordinate rules.
/// Each branch is asserted against ud_e(i, 1, .).
pub fn e_tilde(i: usize, p: &LatticePoint) -> Result<LatticePoint> {
    let n = p.n();
    check_node(i, n)?;
    let out = match i {
        1 => bump(p, n + 1, 1),
        i if i == n => bump(p, n, 1),
        0 => {
            let top = (2..=n).map(|k| p.beta(k)).max().expect("nonempty");
            let site = (2..=n).find(|&k| p.beta(k) == top).unwrap();
            let mut x = p.x.clone();
            for k in site..=n + site - 1 {
                x[k - 2] -= 1;
            }
            LatticePoint { n, x }
        }
        _ => {
            if p.beta(i) >= p.beta(i + 1) {
                bump(p, n + i, 1)
            } else {
                bump(p, i, 1)
            }
        }
    };
    debug_assert_eq!(out, ud_e(i, 1, p)?, "one-step raising disagrees at i={i}");
    Ok(out)
}

/// One-step lowering at node i, by the displayed single-coordinate rules.
/// Each branch is asserted against ud_e(i, -1, .).
pub fn f_tilde(i: usize, p: &LatticePoint) -> Result<LatticePoint> {
    let n = p.n();
    check_node(i, n)?;
    let out = match i {
        1 => bump(p, n + 1, -1),
        i if i == n => bump(p, n, -1),
        0 => {
            let site = zero_lowering_site(p);
            let mut x = p.x.clone();
            for k in site..=n + site - 1 {
                x[k - 2] += 1;
            }
            LatticePoint { n, x }
        }
        _ => {
            if p.beta(i) > p.beta(i + 1) {
                bump(p, n + i, -1)
            } else {
                bump(p, i, -1)
            }
        }
    };
    debug_assert_eq!(out, ud_e(i, -1, p)?, "one-step lowering disagrees at i={i}");
    Ok(out)
}

/// Applies the one-step operator named like f0 or e2.
pub fn apply_named(op: &str, p: &LatticePoint) -> Result<LatticePoint> {
    let (lowering, i) = pcrystal::parse_op_name(op)?;
    if lowering {
        f_tilde(i, p)
    } else {
        e_tilde(i, p)
    }
}

/// Reads a lattice point as a two-row array: row 1 lists consecutive
/// differences of x_{n+1}..x_{2n-1} (with a leading x_{n+1} and trailing
/// -x_{2n-1}), row 2 the same for x_2..x_n. Both rows telescope to 0, so
/// the image sits in the limit-level crystal.
pub fn omega(p: &LatticePoint) -> Result<CrystalElt> {
    let n = p.n();
    let x = |k: usize| p.x_at(k);
    let mut b1 = Vec::with_capacity(n);
    b1.push(x(n + 1));
    for i in 2..n {
        b1.push(x(n + i) - x(n + i - 1));
    }
    b1.push(-x(2 * n - 1));
    let mut b2 = Vec::with_capacity(n);
    b2.push(x(2));
    for i in 3..=n {
        b2.push(x(i) - x(i - 1));
    }
    b2.push(-x(n));
    CrystalElt::new(n, Level::Infinite, b1, b2)
}

/// Inverse of omega: partial sums of the rows. Only the limit-level
/// crystal lies in the chart.
pub fn omega_inv(b: &CrystalElt) -> Result<LatticePoint> {
    if b.level() != Level::Infinite {
        return Err(Error::Domain(
            "the lattice chart covers only the limit-level crystal".into(),
        ));
    }
    let n = b.n();
    let mut x = vec![0i64; 2 * n - 2];
    let mut acc = 0;
    for i in 2..=n {
        acc += b.b2_at(i);
        x[i - 2] = acc;
    }
    acc = 0;
    for i in 1..n {
        acc += b.b1_at(i);
        x[n + i - 2] = acc;
    }
    LatticePoint::new(n, x)
}

/// Where a verification suite samples the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Every point of [-radius, radius]^{2n-2}.
    Box { radius: i64 },
    /// Seeded uniform draws from [-50, 50]^{2n-2}.
    Sample { count: usize, seed: u64 },
}

const SAMPLE_BOUND: i64 = 50;
const REGION_CAP: u128 = 1_000_000;

impl Region {
    /// Exhaustive boxes where that stays cheap, samples above.
    pub fn default_for(n: usize) -> Region {
        match n {
            2 => Region::Box { radius: 4 },
            3 => Region::Box { radius: 3 },
            _ => Region::Sample {
                count: 10_000,
                seed: 2024,
            },
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Region::Box { radius } => format!("box radius {radius}"),
            Region::Sample { count, seed } => format!("sample count {count} seed {seed}"),
        }
    }
}

fn region_points(n: usize, region: Region) -> Result<Vec<LatticePoint>> {
    CartanData::new(n)?;
    let dim = 2 * n - 2;
    match region {
        Region::Box { radius } => {
            if radius < 0 {
                return Err(Error::Domain("box radius cannot be negative".into()));
            }
            let side = 2 * radius as u128 + 1;
            let total = side.checked_pow(dim as u32).ok_or_else(|| {
                Error::ResourceCap("box point count overflows".into())
            })?;
            if total > REGION_CAP {
                return Err(Error::ResourceCap(format!(
                    "box has {total} points (cap {REGION_CAP}); sample instead"
                )));
            }
            let mut out = Vec::with_capacity(total as usize);
            let mut coords = vec![-radius; dim];
            loop {
                out.push(LatticePoint {
                    n,
                    x: coords.clone(),
                });
                let mut pos = dim;
                while pos > 0 {
                    pos -= 1;
                    if coords[pos] < radius {
                        coords[pos] += 1;
                        break;
                    }
                    coords[pos] = -radius;
                    if pos == 0 {
                        return Ok(out);
                    }
                }
            }
        }
        Region::Sample { count, seed } => {
            if count as u128 > REGION_CAP {
                return Err(Error::ResourceCap(format!(
                    "sample of {count} points exceeds cap {REGION_CAP}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let out = (0..count)
                .map(|_| LatticePoint {
                    n,
                    x: (0..dim)
                        .map(|_| rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND))
                        .collect(),
                })
                .collect();
            Ok(out)
        }
    }
}

const MAX_WITNESSES: usize = 25;

#[derive(Debug, Serialize)]
pub struct UdFailure {
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct UdReport {
    pub suite: String,
    pub n: usize,
    pub region: String,
    pub points: usize,
    pub checks_run: u64,
    pub failure_count: u64,
    pub failures: Vec<UdFailure>,
}

impl UdReport {
    fn new(suite: &str, n: usize, region: Region, points: usize) -> Self {
        UdReport {
            suite: suite.into(),
            n,
            region: region.describe(),
            points,
            checks_run: 0,
            failure_count: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    fn record(&mut self, ok: bool, check: &str, detail: impl FnOnce() -> String) {
        self.checks_run += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < MAX_WITNESSES {
                self.failures.push(UdFailure {
                    check: check.into(),
                    detail: detail(),
                });
            }
        }
    }
}

/// Checks that omega is an isomorphism of crystals over the region: it
/// round-trips, intertwines every one-step operator, and transports the
/// weight and string functions.
pub fn verify_iso(n: usize, region: Region) -> Result<UdReport> {
    let points = region_points(n, region)?;
    let mut report = UdReport::new("iso", n, region, points.len());
    for p in &points {
        let b = omega(p)?;
        report.record(&omega_inv(&b)? == p, "round-trip", || p.text());
        for i in 0..=n {
            report.record(
                ud_wt(i, p)? == pcrystal::wt(i, &b)?,
                "weight-transport",
                || format!("i={i} at {}", p.text()),
            );
            report.record(
                ud_eps(i, p)? == pcrystal::eps(i, &b)?,
                "string-transport",
                || format!("i={i} at {}", p.text()),
            );
            report.record(
                ud_phi(i, p)? == pcrystal::phi(i, &b)?,
                "costring-transport",
                || format!("i={i} at {}", p.text()),
            );
            let lowered = pcrystal::f_op(i, &b)?.expect("limit lowering is total");
            report.record(
                omega(&f_tilde(i, p)?)? == lowered,
                "lowering-intertwines",
                || format!("i={i} at {}", p.text()),
            );
            let raised = pcrystal::e_op(i, &b)?.expect("limit raising is total");
            report.record(
                omega(&e_tilde(i, p)?)? == raised,
                "raising-intertwines",
                || format!("i={i} at {}", p.text()),
            );
        }
    }
    Ok(report)
}

/// Checks that the direct piecewise-linear formulas agree with the
/// mechanical rewrite of the symbolic catalog at every sampled point, for
/// parameters c in [-2, 2] on the action coordinates.
pub fn verify_ud_mechanical(n: usize, region: Region) -> Result<UdReport> {
    let points = region_points(n, region)?;
    let mut weight_forms = BTreeMap::new();
    let mut string_forms = BTreeMap::new();
    let mut action_forms = BTreeMap::new();
    for target in catalog_targets(n) {
        let form = tropicalize(&catalog_entry(n, target)?);
        match target {
            CatalogTarget::Gamma(i) => {
                weight_forms.insert(i, form);
            }
            CatalogTarget::Eps(i) => {
                string_forms.insert(i, form);
            }
            CatalogTarget::ECoord(i, k) => {
                action_forms.insert((i, k), form);
            }
        }
    }
    let mut report = UdReport::new("mechanical", n, region, points.len());
    let eval = |form: &TropExpr, bind: &Bindings<i64>| -> Result<i64> { eval_trop(form, bind) };
    for p in &points {
        let mut bind = Bindings::<i64>::new(2 * n - 1);
        for k in 2..=2 * n - 1 {
            bind.set_x(k, p.x_at(k));
        }
        for i in 0..=n {
            report.record(
                eval(&weight_forms[&i], &bind)? == ud_wt(i, p)?,
                "weight-tropicalization",
                || format!("i={i} at {}", p.text()),
            );
            report.record(
                eval(&string_forms[&i], &bind)? == ud_eps(i, p)?,
                "string-tropicalization",
                || format!("i={i} at {}", p.text()),
            );
        }
        for c in -2..=2 {
            bind.set_c(c);
            for i in 0..=n {
                let moved = ud_e(i, c, p)?;
                for k in 2..=2 * n - 1 {
                    report.record(
                        eval(&action_forms[&(i, k)], &bind)? == moved.x_at(k),
                        "action-tropicalization",
                        || format!("i={i} k={k} c={c} at {}", p.text()),
                    );
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(n: usize, coords: &[i64]) -> LatticePoint {
        LatticePoint::new(n, coords.to_vec()).unwrap()
    }

    #[test]
    fn point_validation_parse_and_json() {
        assert!(LatticePoint::new(3, vec![1, 2, 3]).is_err());
        assert!(LatticePoint::new(1, vec![]).is_err());
        let p = LatticePoint::parse(3, "1, 2,3,4").unwrap();
        assert_eq!(p.coords(), &[1, 2, 3, 4]);
        assert_eq!(p.text(), "1,2,3,4");
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"n":3,"x":[1,2,3,4]}"#
        );
        assert!(LatticePoint::parse(3, "1,2,x,4").is_err());
        assert_eq!(p.xb(1), 0);
        assert_eq!(p.xb(6), 0);
        assert_eq!(p.xb(4), 3);
    }

    #[test]
    fn weight_and_string_fixed_values() {
        let p = pt(3, &[1, 2, 3, 4]);
        assert_eq!(ud_wt(0, &p).unwrap(), -5);
        assert_eq!(ud_wt(1, &p).unwrap(), 1);
        assert_eq!(ud_wt(2, &p).unwrap(), 5);
        assert_eq!(ud_wt(3, &p).unwrap(), -1);
        assert_eq!(ud_eps(0, &p).unwrap(), 1);
        assert_eq!(ud_eps(1, &p).unwrap(), 1);
        assert_eq!(ud_eps(2, &p).unwrap(), -4);
        assert_eq!(ud_eps(3, &p).unwrap(), 2);
        // Weight coordinates sum to zero on the row-sum-zero chart.
        assert_eq!((0..=3).map(|i| ud_wt(i, &p).unwrap()).sum::<i64>(), 0);
    }

    #[test]
    fn one_step_rules_fixed_values() {
        let o3 = LatticePoint::origin(3).unwrap();
        assert_eq!(f_tilde(0, &o3).unwrap().coords(), &[0, 1, 1, 1]);
        assert_eq!(e_tilde(0, &o3).unwrap().coords(), &[-1, -1, -1, 0]);

        let p = pt(3, &[1, 2, 3, 4]);
        // beta_2 = beta_3 = -2: the tie sends lowering to the first row.
        assert_eq!(f_tilde(2, &p).unwrap().coords(), &[0, 2, 3, 4]);
        assert_eq!(e_tilde(2, &p).unwrap().coords(), &[1, 2, 3, 5]);
        assert_eq!(f_tilde(1, &p).unwrap().coords(), &[1, 2, 2, 4]);
        assert_eq!(f_tilde(3, &p).unwrap().coords(), &[1, 1, 3, 4]);
    }

    #[test]
    fn one_step_rules_invert_each_other() {
        for n in 2..=4 {
            for p in region_points(n, Region::Sample { count: 40, seed: 77 }).unwrap() {
                for i in 0..=n {
                    assert_eq!(e_tilde(i, &f_tilde(i, &p).unwrap()).unwrap(), p);
                    assert_eq!(f_tilde(i, &e_tilde(i, &p).unwrap()).unwrap(), p);
                }
            }
        }
    }

    #[test]
    fn action_parameters_add() {
        for n in 2..=4 {
            for p in region_points(n, Region::Sample { count: 25, seed: 99 }).unwrap() {
                for i in 0..=n {
                    assert_eq!(ud_e(i, 0, &p).unwrap(), p);
                    for c in -3..=3 {
                        for d in -3..=3 {
                            let two_steps = ud_e(i, c, &ud_e(i, d, &p).unwrap()).unwrap();
                            let one_step = ud_e(i, c + d, &p).unwrap();
                            assert_eq!(two_steps, one_step, "n={n} i={i} c={c} d={d}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn string_bookkeeping_under_one_step() {
        for n in 2..=4 {
            for p in region_points(n, Region::Sample { count: 30, seed: 55 }).unwrap() {
                for i in 0..=n {
                    let down = f_tilde(i, &p).unwrap();
                    assert_eq!(ud_eps(i, &down).unwrap(), ud_eps(i, &p).unwrap() + 1);
                    assert_eq!(ud_phi(i, &down).unwrap(), ud_phi(i, &p).unwrap() - 1);
                }
            }
        }
    }

    #[test]
    fn chart_map_fixed_value_and_round_trip() {
        let p = pt(3, &[1, 2, 3, 4]);
        let b = omega(&p).unwrap();
        assert_eq!(b.rows(), (&[3, 1, -4][..], &[1, 1, -2][..]));
        assert_eq!(omega_inv(&b).unwrap(), p);

        let o2 = LatticePoint::origin(2).unwrap();
        assert_eq!(omega(&o2).unwrap(), CrystalElt::infinite_zero(2).unwrap());

        for n in 2..=5 {
            for q in region_points(n, Region::Sample { count: 20, seed: 11 }).unwrap() {
                assert_eq!(omega_inv(&omega(&q).unwrap()).unwrap(), q);
            }
        }
    }

    #[test]
    fn chart_map_rejects_finite_level() {
        let b = CrystalElt::new(2, Level::Finite(1), vec![1, 0], vec![1, 0]).unwrap();
        assert!(matches!(omega_inv(&b), Err(Error::Domain(_))));
    }

    #[test]
    fn iso_suite_passes_small_boxes() {
        let r2 = verify_iso(2, Region::Box { radius: 4 }).unwrap();
        assert!(r2.passed(), "{:?}", r2.failures);
        assert_eq!(r2.points, 81);
        let r3 = verify_iso(3, Region::Box { radius: 2 }).unwrap();
        assert!(r3.passed(), "{:?}", r3.failures);
        assert_eq!(r3.points, 625);
        let r4 = verify_iso(4, Region::Sample { count: 300, seed: 7 }).unwrap();
        assert!(r4.passed(), "{:?}", r4.failures);
    }

    #[test]
    fn mechanical_suite_passes_small_boxes() {
        let r2 = verify_mechanical_small(2, Region::Box { radius: 4 });
        assert!(r2.passed(), "{:?}", r2.failures);
        let r3 = verify_mechanical_small(3, Region::Box { radius: 2 });
        assert!(r3.passed(), "{:?}", r3.failures);
        let r4 = verify_mechanical_small(4, Region::Sample { count: 200, seed: 13 });
        assert!(r4.passed(), "{:?}", r4.failures);
    }

    fn verify_mechanical_small(n: usize, region: Region) -> UdReport {
        verify_ud_mechanical(n, region).unwrap()
    }

    #[test]
    fn suite_reports_are_deterministic() {
        let region = Region::Sample { count: 50, seed: 42 };
        let a = serde_json::to_string(&verify_iso(3, region).unwrap()).unwrap();
        let b = serde_json::to_string(&verify_iso(3, region).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn region_caps_and_errors() {
        assert!(matches!(
            region_points(4, Region::Box { radius: 10 }),
            Err(Error::ResourceCap(_))
        ));
        assert!(matches!(
            region_points(2, Region::Box { radius: -1 }),
            Err(Error::Domain(_))
        ));
        assert_eq!(
            region_points(2, Region::Box { radius: 1 }).unwrap().len(),
            9
        );
    }

    #[test]
    fn flipped_tie_break_is_detected() {
        // At a beta tie the lowering rule must move the first-block
        // coordinate; moving the second-block one instead disagrees with
        // the parameterized action and breaks string bookkeeping.
        let p = pt(3, &[1, 2, 3, 4]);
        assert_eq!(p.beta(2), p.beta(3));
        let honest = f_tilde(2, &p).unwrap();
        let flipped = bump(&p, 3 + 2, -1);
        assert_eq!(honest, ud_e(2, -1, &p).unwrap());
        assert_ne!(flipped, ud_e(2, -1, &p).unwrap());
        assert_eq!(ud_eps(2, &honest).unwrap(), ud_eps(2, &p).unwrap() + 1);
        assert_ne!(ud_eps(2, &flipped).unwrap(), ud_eps(2, &p).unwrap() + 1);
    }

    #[test]
    fn zero_node_site_tie_break_is_detected() {
        // All betas tie at the origin: lowering must pick the rightmost
        // site. The leftmost run disagrees with the parameterized action.
        let o3 = LatticePoint::origin(3).unwrap();
        assert_eq!(zero_lowering_site(&o3), 3);
        let mut leftmost = o3.coords().to_vec();
        for k in 2..=4 {
            leftmost[k - 2] += 1;
        }
        let leftmost = LatticePoint::new(3, leftmost).unwrap();
        assert_ne!(leftmost, ud_e(0, -1, &o3).unwrap());
        assert_eq!(f_tilde(0, &o3).unwrap(), ud_e(0, -1, &o3).unwrap());
    }

    #[test]
    fn node_index_checked() {
        let p = LatticePoint::origin(2).unwrap();
        assert!(ud_wt(3, &p).is_err());
        assert!(ud_e(9, 1, &p).is_err());
    }
}

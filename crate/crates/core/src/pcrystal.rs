//! Crystals on two-row arrays.
//!
//! An element of level l is a pair of rows (b_{1,1}..b_{1,n}) and
//! (b_{2,2}..b_{2,n+1}) of nonnegative integers with both row sums equal to
//! l and the interlacing condition
//! b_{1,1}+..+b_{1,t} >= b_{2,2}+..+b_{2,t+1} for 1 <= t <= n. The limit
//! level (written "inf" in JSON) drops positivity and interlacing and fixes
//! both row sums at 0; there the operators act freely.
//!
//! Raising and lowering at nodes 1..n shuffle one unit between adjacent
//! columns of a single row. The zero node moves two units at a column site
//! m picked by a sign condition on partial sums; the site is provably the
//! leftmost (raising) or rightmost (lowering) minimum of those partial
//! sums, and the scan below asserts that equivalence at runtime.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cartan::CartanData;
use crate::error::{Error, Result};

/// Crystal level: a positive integer, or the row-sum-zero limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Finite(u64),
    Infinite,
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Level::Finite(l) => ser.serialize_u64(*l),
            Level::Infinite => ser.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Level {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct LevelVisitor;

        impl Visitor<'_> for LevelVisitor {
            type Value = Level;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a nonnegative integer or \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Level, E> {
                Ok(Level::Finite(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Level, E> {
                if v < 0 {
                    Err(E::custom("level cannot be negative"))
                } else {
                    Ok(Level::Finite(v as u64))
                }
            }

            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Level, E> {
                if s == "inf" {
                    Ok(Level::Infinite)
                } else {
                    Err(E::custom(format!("expected \"inf\", got {s:?}")))
                }
            }
        }

        de.deserialize_any(LevelVisitor)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(l) => write!(f, "{l}"),
            Level::Infinite => write!(f, "inf"),
        }
    }
}

/// A two-row array element. `b1` holds b_{1,1}..b_{1,n}, `b2` holds
/// b_{2,2}..b_{2,n+1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrystalElt {
    n: usize,
    level: Level,
    b1: Vec<i64>,
    b2: Vec<i64>,
}

impl CrystalElt {
    pub fn new(n: usize, level: Level, b1: Vec<i64>, b2: Vec<i64>) -> Result<Self> {
        let elt = CrystalElt { n, level, b1, b2 };
        elt.validate()?;
        Ok(elt)
    }

    /// The all-zero element of the limit crystal.
    pub fn infinite_zero(n: usize) -> Result<Self> {
        CrystalElt::new(n, Level::Infinite, vec![0; n], vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> Level {
        self.level
    }

    /// Row-1 entry b_{1,i}, 1 <= i <= n.
    pub fn b1_at(&self, i: usize) -> i64 {
        assert!((1..=self.n).contains(&i), "row-1 index {i} out of range");
        self.b1[i - 1]
    }

    /// Row-2 entry b_{2,i}, 2 <= i <= n+1.
    pub fn b2_at(&self, i: usize) -> i64 {
        assert!((2..=self.n + 1).contains(&i), "row-2 index {i} out of range");
        self.b2[i - 2]
    }

    pub fn rows(&self) -> (&[i64], &[i64]) {
        (&self.b1, &self.b2)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidRank(self.n));
        }
        if self.b1.len() != self.n || self.b2.len() != self.n {
            return Err(Error::InvalidElement(format!(
                "rows must each have {} entries, got {} and {}",
                self.n,
                self.b1.len(),
                self.b2.len()
            )));
        }
        let s1: i64 = self.b1.iter().sum();
        let s2: i64 = self.b2.iter().sum();
        match self.level {
            Level::Infinite => {
                if s1 != 0 || s2 != 0 {
                    return Err(Error::InvalidElement(format!(
                        "limit-level rows must sum to 0, got {s1} and {s2}"
                    )));
                }
            }
            Level::Finite(l) => {
                if l == 0 {
                    return Err(Error::InvalidElement("level must be at least 1".into()));
                }
                if self.b1.iter().chain(self.b2.iter()).any(|&v| v < 0) {
                    return Err(Error::InvalidElement(
                        "finite-level entries must be nonnegative".into(),
                    ));
                }
                if s1 != l as i64 || s2 != l as i64 {
                    return Err(Error::InvalidElement(format!(
                        "rows must sum to the level {l}, got {s1} and {s2}"
                    )));
                }
                let mut top = 0i64;
                let mut bottom = 0i64;
                for t in 1..=self.n {
                    top += self.b1_at(t);
                    bottom += self.b2_at(t + 1);
                    if top < bottom {
                        return Err(Error::InvalidElement(format!(
                            "interlacing fails at column {t}: {top} < {bottom}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parses and validates a JSON element.
    pub fn parse_json(text: &str) -> Result<Self> {
        let elt: CrystalElt =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        elt.validate()?;
        Ok(elt)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("element serialization cannot fail")
    }

    /// Compact one-line form "b11,..,b1n|b22,..,b2n+1".
    pub fn text(&self) -> String {
        let join = |row: &[i64]| {
            row.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!("{}|{}", join(&self.b1), join(&self.b2))
    }
}

fn check_node(k: usize, n: usize) -> Result<()> {
    if k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n });
    }
    Ok(())
}

/// z_i = b_{1,i} - b_{2,i+1}, defined for 2 <= i <= n-1.
fn z(b: &CrystalElt, i: usize) -> i64 {
    b.b1_at(i) - b.b2_at(i + 1)
}

/// Site 2 <= m <= n where the zero-node operator acts.
///
/// For lowering, m must satisfy z_k+..+z_{m-1} <= 0 for all 2 <= k <= m-1
/// and z_m+..+z_k > 0 for all m <= k <= n-1; raising uses the strict/weak
/// variants swapped. Exactly one site qualifies: in terms of the partial
/// sums P_m = z_2+..+z_{m-1}, the conditions pick the rightmost (lowering)
/// or leftmost (raising) minimum. The scan below applies the sign
/// conditions verbatim and asserts the argmin characterization.
fn zero_node_site(b: &CrystalElt, lowering: bool) -> usize {
    let n = b.n();
    let mut found = Vec::new();
    for m in 2..=n {
        let mut ok = true;
        for k in 2..m {
            let s: i64 = (k..m).map(|i| z(b, i)).sum();
            ok &= if lowering { s <= 0 } else { s < 0 };
        }
        for k in m..n {
            let s: i64 = (m..=k).map(|i| z(b, i)).sum();
            ok &= if lowering { s > 0 } else { s >= 0 };
        }
        if ok {
            found.push(m);
        }
    }
    assert_eq!(found.len(), 1, "zero-node site must be unique, got {found:?}");
    let site = found[0];

    let mut partial = vec![0i64; n + 1];
    for m in 3..=n {
        partial[m] = partial[m - 1] + z(b, m - 1);
    }
    let min = *partial[2..=n].iter().min().expect("nonempty");
    let argmin = if lowering {
        (2..=n).rev().find(|&m| partial[m] == min).unwrap()
    } else {
        (2..=n).find(|&m| partial[m] == min).unwrap()
    };
    assert_eq!(site, argmin, "scan disagrees with the argmin characterization");
    site
}

/// Applies unit moves (row, column, delta) and revalidates. Finite-level
/// results that violate the constraints are reported as None; limit-level
/// moves always succeed.
fn apply_moves(b: &CrystalElt, moves: &[(u8, usize, i64)]) -> Option<CrystalElt> {
    let mut b1 = b.b1.clone();
    let mut b2 = b.b2.clone();
    for &(row, col, delta) in moves {
        match row {
            1 => b1[col - 1] += delta,
            _ => b2[col - 2] += delta,
        }
    }
    let cand = CrystalElt {
        n: b.n,
        level: b.level,
        b1,
        b2,
    };
    match b.level {
        Level::Infinite => {
            debug_assert!(cand.validate().is_ok());
            Some(cand)
        }
        Level::Finite(_) => cand.validate().ok().map(|_| cand),
    }
}

/// Lowering operator at node k. None when the result leaves the crystal.
pub fn f_op(k: usize, b: &CrystalElt) -> Result<Option<CrystalElt>> {
    let n = b.n();
    check_node(k, n)?;
    let moves: Vec<(u8, usize, i64)> = match k {
        0 => {
            let m = zero_node_site(b, true);
            vec![(1, 1, 1), (1, m, -1), (2, m, 1), (2, n + 1, -1)]
        }
        1 => vec![(1, 1, -1), (1, 2, 1)],
        k if k == n => vec![(2, n, -1), (2, n + 1, 1)],
        _ => {
            if b.b1_at(k) > b.b2_at(k + 1) {
                vec![(1, k, -1), (1, k + 1, 1)]
            } else {
                vec![(2, k, -1), (2, k + 1, 1)]
            }
        }
    };
    Ok(apply_moves(b, &moves))
}

/// Raising operator at node k. None when the result leaves the crystal.
pub fn e_op(k: usize, b: &CrystalElt) -> Result<Option<CrystalElt>> {
    let n = b.n();
    check_node(k, n)?;
    let moves: Vec<(u8, usize, i64)> = match k {
        0 => {
            let m = zero_node_site(b, false);
            vec![(1, 1, -1), (1, m, 1), (2, m, -1), (2, n + 1, 1)]
        }
        1 => vec![(1, 1, 1), (1, 2, -1)],
        k if k == n => vec![(2, n, 1), (2, n + 1, -1)],
        _ => {
            if b.b1_at(k) >= b.b2_at(k + 1) {
                vec![(1, k, 1), (1, k + 1, -1)]
            } else {
                vec![(2, k, 1), (2, k + 1, -1)]
            }
        }
    };
    Ok(apply_moves(b, &moves))
}

/// Parses an operator name (f0..fn or e0..en) into (lowering, node).
pub fn parse_op_name(op: &str) -> Result<(bool, usize)> {
    let bad = || Error::Parse(format!("unknown operator {op:?}; expected f0..fn or e0..en"));
    let (head, tail) = op.split_at(op.len().min(1));
    let index: usize = tail.parse().map_err(|_| bad())?;
    match head {
        "f" => Ok((true, index)),
        "e" => Ok((false, index)),
        _ => Err(bad()),
    }
}

/// Applies the operator named like f0 or e2.
pub fn apply_named(op: &str, b: &CrystalElt) -> Result<Option<CrystalElt>> {
    let (lowering, k) = parse_op_name(op)?;
    if lowering {
        f_op(k, b)
    } else {
        e_op(k, b)
    }
}

/// Column weight Delta(m) = b_{1,2}+..+b_{1,m-1} + b_{2,m+1}+..+b_{2,n},
/// minimized over 2 <= m <= n.
pub fn delta(b: &CrystalElt) -> i64 {
    let n = b.n();
    (2..=n)
        .map(|m| {
            let top: i64 = (2..m).map(|i| b.b1_at(i)).sum();
            let bottom: i64 = (m + 1..=n).map(|i| b.b2_at(i)).sum();
            top + bottom
        })
        .min()
        .expect("site range is nonempty")
}

fn level_value(b: &CrystalElt) -> i64 {
    match b.level() {
        Level::Finite(l) => l as i64,
        Level::Infinite => 0,
    }
}

/// String length toward the raising operator at node k.
pub fn eps(k: usize, b: &CrystalElt) -> Result<i64> {
    let n = b.n();
    check_node(k, n)?;
    Ok(match k {
        0 => level_value(b) - b.b2_at(n + 1) - delta(b),
        1 => b.b1_at(2),
        k if k == n => b.b2_at(n + 1) - b.b1_at(n),
        _ => b.b1_at(k + 1) + (b.b2_at(k + 1) - b.b1_at(k)).max(0),
    })
}

/// String length toward the lowering operator at node k.
pub fn phi(k: usize, b: &CrystalElt) -> Result<i64> {
    let n = b.n();
    check_node(k, n)?;
    Ok(match k {
        0 => level_value(b) - b.b1_at(1) - delta(b),
        1 => b.b1_at(1) - b.b2_at(2),
        k if k == n => b.b2_at(n),
        _ => b.b2_at(k) + (b.b1_at(k) - b.b2_at(k + 1)).max(0),
    })
}

/// Weight coordinate at node k; always phi - eps.
pub fn wt(k: usize, b: &CrystalElt) -> Result<i64> {
    let n = b.n();
    check_node(k, n)?;
    Ok(match k {
        0 => b.b2_at(n + 1) - b.b1_at(1),
        1 => b.b1_at(1) - b.b1_at(2) - b.b2_at(2),
        k if k == n => b.b1_at(n) + b.b2_at(n) - b.b2_at(n + 1),
        _ => (b.b1_at(k) - b.b1_at(k + 1)) + (b.b2_at(k) - b.b2_at(k + 1)),
    })
}

const ENUM_CAP: u128 = 1_000_000;

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            let mut v = Vec::with_capacity(parts);
            v.push(first);
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// All level-l elements at rank n, in lexicographic row order.
pub fn enumerate(n: usize, l: u64) -> Result<Vec<CrystalElt>> {
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    if l == 0 {
        return Err(Error::InvalidElement("level must be at least 1".into()));
    }
    let per_row = binomial(l + n as u64 - 1, n as u64 - 1);
    if per_row * per_row > ENUM_CAP {
        return Err(Error::ResourceCap(format!(
            "enumeration at n={n}, l={l} would examine {} row pairs (cap {})",
            per_row * per_row,
            ENUM_CAP
        )));
    }
    let rows = compositions(l as i64, n);
    let mut out = Vec::new();
    for b1 in &rows {
        for b2 in &rows {
            let cand = CrystalElt {
                n,
                level: Level::Finite(l),
                b1: b1.clone(),
                b2: b2.clone(),
            };
            if cand.validate().is_ok() {
                out.push(cand);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphEdge {
    pub source: usize,
    pub target: usize,
    pub color: usize,
}

/// The colored lowering graph of a finite-level crystal: one node per
/// element, an edge u -> v with color k whenever the node-k lowering
/// operator sends u to v.
#[derive(Debug)]
pub struct CrystalGraph {
    n: usize,
    l: u64,
    nodes: Vec<CrystalElt>,
    edges: Vec<GraphEdge>,
}

impl CrystalGraph {
    pub fn nodes(&self) -> &[CrystalElt] {
        &self.nodes
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph crystal {\n");
        for (idx, node) in self.nodes.iter().enumerate() {
            out.push_str(&format!("  n{idx} [label=\"{}\"];\n", node.text()));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  n{} -> n{} [label=\"{}\"];\n",
                e.source, e.target, e.color
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "l": self.l,
            "nodes": self.nodes.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
            "edges": self.edges,
        })
    }
}

pub fn crystal_graph(n: usize, l: u64) -> Result<CrystalGraph> {
    let nodes = enumerate(n, l)?;
    let index: BTreeMap<(Vec<i64>, Vec<i64>), usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, b)| ((b.b1.clone(), b.b2.clone()), i))
        .collect();
    let mut edges = Vec::new();
    for (source, b) in nodes.iter().enumerate() {
        for k in 0..=n {
            if let Some(next) = f_op(k, b)? {
                let target = index[&(next.b1.clone(), next.b2.clone())];
                edges.push(GraphEdge { source, target, color: k });
            }
        }
    }
    Ok(CrystalGraph { n, l, nodes, edges })
}

const MAX_FAILURES: usize = 25;

/// Exhaustive crystal-axiom scan over one finite level: partial inverses,
/// definedness matching string positivity, string bookkeeping under
/// lowering, wt = phi - eps, and weight transport against the Cartan
/// matrix. Returns human-readable violations, at most 25.
pub fn axiom_scan(n: usize, l: u64) -> Result<Vec<String>> {
    let cd = CartanData::new(n)?;
    let elements = enumerate(n, l)?;
    let mut bad = Vec::new();
    let record = |msg: String, bad: &mut Vec<String>| {
        if bad.len() < MAX_FAILURES {
            bad.push(msg);
        }
    };
    for b in &elements {
        for k in 0..=n {
            if wt(k, b)? != phi(k, b)? - eps(k, b)? {
                record(format!("wt != phi - eps at k={k}, b={}", b.text()), &mut bad);
            }
            let down = f_op(k, b)?;
            if down.is_some() != (phi(k, b)? > 0) {
                record(
                    format!("lowering definedness mismatch at k={k}, b={}", b.text()),
                    &mut bad,
                );
            }
            let up = e_op(k, b)?;
            if up.is_some() != (eps(k, b)? > 0) {
                record(
                    format!("raising definedness mismatch at k={k}, b={}", b.text()),
                    &mut bad,
                );
            }
            if let Some(next) = down {
                if e_op(k, &next)?.as_ref() != Some(b) {
                    record(format!("raising does not invert lowering at k={k}, b={}", b.text()), &mut bad);
                }
                if eps(k, &next)? != eps(k, b)? + 1 || phi(k, &next)? != phi(k, b)? - 1 {
                    record(
                        format!("string bookkeeping fails at k={k}, b={}", b.text()),
                        &mut bad,
                    );
                }
                for j in 0..=n {
                    if wt(j, &next)? != wt(j, b)? - cd.a(j, k) {
                        record(
                            format!("weight transport fails at j={j}, k={k}, b={}", b.text()),
                            &mut bad,
                        );
                    }
                }
            }
            if let Some(prev) = up {
                if f_op(k, &prev)?.as_ref() != Some(b) {
                    record(format!("lowering does not invert raising at k={k}, b={}", b.text()), &mut bad);
                }
            }
        }
    }
    Ok(bad)
}

#[derive(Debug, Serialize)]
pub struct PerfectReport {
    pub n: usize,
    pub l: u64,
    pub size: usize,
    pub minimal_count: usize,
    pub expected_minimal: u64,
    pub eps_bijective: bool,
    pub phi_bijective: bool,
    pub axioms_ok: bool,
    pub failures: Vec<String>,
}

impl PerfectReport {
    pub fn passed(&self) -> bool {
        self.minimal_count as u64 == self.expected_minimal
            && self.eps_bijective
            && self.phi_bijective
            && self.axioms_ok
            && self.failures.is_empty()
    }
}

/// Checks the level-l structure: the minimal elements (string lengths
/// summing to l) must biject onto the level-l dominant tuples through both
/// the eps and the phi string vectors, and the axiom scan must be clean.
pub fn perfectness_check(n: usize, l: u64) -> Result<PerfectReport> {
    let elements = enumerate(n, l)?;
    let mut failures = Vec::new();
    let mut eps_tuples = BTreeSet::new();
    let mut phi_tuples = BTreeSet::new();
    let mut minimal_count = 0usize;
    for b in &elements {
        let evec: Vec<i64> = (0..=n).map(|k| eps(k, b)).collect::<Result<_>>()?;
        let pvec: Vec<i64> = (0..=n).map(|k| phi(k, b)).collect::<Result<_>>()?;
        let esum: i64 = evec.iter().sum();
        if esum == l as i64 {
            minimal_count += 1;
            if evec.iter().any(|&v| v < 0) {
                failures.push(format!("negative string vector on minimal {}", b.text()));
            }
            if pvec.iter().any(|&v| v < 0) || pvec.iter().sum::<i64>() != l as i64 {
                failures.push(format!("phi vector not dominant on minimal {}", b.text()));
            }
            if !eps_tuples.insert(evec) {
                failures.push(format!("duplicate eps vector at {}", b.text()));
            }
            if !phi_tuples.insert(pvec) {
                failures.push(format!("duplicate phi vector at {}", b.text()));
            }
        }
    }
    let expected_minimal = binomial(n as u64 + l, n as u64) as u64;
    let axioms = axiom_scan(n, l)?;
    let axioms_ok = axioms.is_empty();
    failures.extend(axioms);
    failures.truncate(MAX_FAILURES);
    Ok(PerfectReport {
        n,
        l,
        size: elements.len(),
        minimal_count,
        expected_minimal,
        eps_bijective: eps_tuples.len() == minimal_count
            && minimal_count as u64 == expected_minimal,
        phi_bijective: phi_tuples.len() == minimal_count
            && minimal_count as u64 == expected_minimal,
        axioms_ok,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn finite(n: usize, l: u64, b1: &[i64], b2: &[i64]) -> CrystalElt {
        CrystalElt::new(n, Level::Finite(l), b1.to_vec(), b2.to_vec()).unwrap()
    }

    fn limit(n: usize, b1: &[i64], b2: &[i64]) -> CrystalElt {
        CrystalElt::new(n, Level::Infinite, b1.to_vec(), b2.to_vec()).unwrap()
    }

    #[test]
    fn validation_rules() {
        assert!(CrystalElt::new(2, Level::Finite(1), vec![1, 0], vec![1, 0]).is_ok());
        // Interlacing: top prefix must dominate.
        assert!(CrystalElt::new(2, Level::Finite(1), vec![0, 1], vec![1, 0]).is_err());
        // Row sums must match the level.
        assert!(CrystalElt::new(2, Level::Finite(2), vec![1, 0], vec![1, 0]).is_err());
        assert!(CrystalElt::new(2, Level::Finite(1), vec![2, -1], vec![1, 0]).is_err());
        assert!(CrystalElt::new(2, Level::Finite(0), vec![0, 0], vec![0, 0]).is_err());
        // Limit level: any signs, zero row sums.
        assert!(CrystalElt::new(3, Level::Infinite, vec![3, 1, -4], vec![1, 1, -2]).is_ok());
        assert!(CrystalElt::new(3, Level::Infinite, vec![1, 0, 0], vec![0, 0, 0]).is_err());
        assert!(CrystalElt::new(1, Level::Infinite, vec![0], vec![0]).is_err());
    }

    #[test]
    fn json_round_trip_with_levels() {
        let a = finite(2, 1, &[1, 0], &[0, 1]);
        let js = serde_json::to_string(&a).unwrap();
        assert_eq!(
            js,
            r#"{"n":2,"level":1,"b1":[1,0],"b2":[0,1]}"#
        );
        assert_eq!(CrystalElt::parse_json(&js).unwrap(), a);

        let b = limit(2, &[-1, 1], &[0, 0]);
        let js = serde_json::to_string(&b).unwrap();
        assert_eq!(
            js,
            r#"{"n":2,"level":"inf","b1":[-1,1],"b2":[0,0]}"#
        );
        assert_eq!(CrystalElt::parse_json(&js).unwrap(), b);

        // Invalid payloads are rejected on parse.
        assert!(CrystalElt::parse_json(r#"{"n":2,"level":1,"b1":[0,1],"b2":[1,0]}"#).is_err());
        assert!(CrystalElt::parse_json(r#"{"n":2,"level":-3,"b1":[0,0],"b2":[0,0]}"#).is_err());
    }

    #[test]
    fn lowering_from_the_limit_origin() {
        let o2 = CrystalElt::infinite_zero(2).unwrap();
        let down = f_op(1, &o2).unwrap().unwrap();
        assert_eq!(down.rows(), (&[-1, 1][..], &[0, 0][..]));

        let o3 = CrystalElt::infinite_zero(3).unwrap();
        let down = f_op(0, &o3).unwrap().unwrap();
        assert_eq!(down.rows(), (&[1, 0, -1][..], &[0, 1, -1][..]));
    }

    #[test]
    fn zero_node_site_prefers_ties_correctly() {
        // All partial sums tie at the origin: lowering picks the rightmost
        // site, raising the leftmost.
        let o4 = CrystalElt::infinite_zero(4).unwrap();
        assert_eq!(zero_node_site(&o4, true), 4);
        assert_eq!(zero_node_site(&o4, false), 2);
    }

    #[test]
    fn finite_boundary_gives_none() {
        let c = finite(2, 1, &[0, 1], &[0, 1]);
        assert_eq!(f_op(1, &c).unwrap(), None);
        let a = finite(2, 1, &[1, 0], &[1, 0]);
        assert_eq!(e_op(2, &a).unwrap(), None);
    }

    #[test]
    fn delta_and_zero_node_strings() {
        let b = limit(3, &[3, 1, -4], &[1, 1, -2]);
        assert_eq!(delta(&b), 1);
        assert_eq!(eps(0, &b).unwrap(), 1);
        assert_eq!(phi(0, &b).unwrap(), -4);
        assert_eq!(wt(0, &b).unwrap(), -5);
    }

    #[test]
    fn small_level_one_cycle() {
        // Rank 2, level 1 is a directed 3-cycle colored 2, 1, 0.
        let g = crystal_graph(2, 1).unwrap();
        assert_eq!(g.nodes().len(), 3);
        let a = finite(2, 1, &[1, 0], &[1, 0]);
        let b = finite(2, 1, &[1, 0], &[0, 1]);
        let c = finite(2, 1, &[0, 1], &[0, 1]);
        assert_eq!(g.nodes(), &[c.clone(), b.clone(), a.clone()]);
        assert_eq!(f_op(2, &a).unwrap(), Some(b.clone()));
        assert_eq!(f_op(1, &b).unwrap(), Some(c.clone()));
        assert_eq!(f_op(0, &c).unwrap(), Some(a.clone()));
        let mut colors: Vec<usize> = g.edges().iter().map(|e| e.color).collect();
        colors.sort_unstable();
        assert_eq!(colors, vec![0, 1, 2]);
        assert_eq!(g.edges().len(), 3);
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph crystal {"));
        assert!(dot.contains("label=\"0,1|0,1\""));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate(2, 1).unwrap().len(), 3);
        assert_eq!(enumerate(2, 2).unwrap().len(), 6);
        assert_eq!(enumerate(3, 1).unwrap().len(), 6);
        assert_eq!(enumerate(4, 1).unwrap().len(), 10);
        assert!(enumerate(2, 0).is_err());
        assert!(matches!(enumerate(6, 40), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn enumeration_is_sorted_and_valid() {
        let all = enumerate(3, 2).unwrap();
        for w in all.windows(2) {
            let key = |b: &CrystalElt| (b.b1.clone(), b.b2.clone());
            assert!(key(&w[0]) < key(&w[1]));
        }
        for b in &all {
            assert!(b.validate().is_ok());
        }
    }

    #[test]
    fn axiom_scan_is_clean_at_desk_scale() {
        for (n, l) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
            let bad = axiom_scan(n, l).unwrap();
            assert!(bad.is_empty(), "(n,l)=({n},{l}): {bad:?}");
        }
    }

    #[test]
    fn perfectness_reports() {
        let expected = [(2, 1, 3), (2, 2, 6), (3, 1, 4), (3, 2, 10)];
        for (n, l, minimal) in expected {
            let report = perfectness_check(n, l).unwrap();
            assert!(report.passed(), "(n,l)=({n},{l}): {:?}", report.failures);
            assert_eq!(report.minimal_count, minimal, "(n,l)=({n},{l})");
            assert_eq!(report.expected_minimal, minimal as u64);
        }
    }

    #[test]
    fn limit_action_is_free_and_invertible() {
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        for n in 2..=5 {
            let cd = CartanData::new(n).unwrap();
            let mut b = CrystalElt::infinite_zero(n).unwrap();
            let mut trail = Vec::new();
            for _ in 0..60 {
                let k = rng.gen_range(0..=n);
                let lower: bool = rng.gen();
                let (e0, p0): (i64, i64) = (eps(k, &b).unwrap(), phi(k, &b).unwrap());
                let wt_before: Vec<i64> = (0..=n).map(|j| wt(j, &b).unwrap()).collect();
                let next = if lower {
                    f_op(k, &b).unwrap().expect("limit lowering is total")
                } else {
                    e_op(k, &b).unwrap().expect("limit raising is total")
                };
                let sign = if lower { 1 } else { -1 };
                assert_eq!(eps(k, &next).unwrap(), e0 + sign);
                assert_eq!(phi(k, &next).unwrap(), p0 - sign);
                for (j, w) in wt_before.iter().enumerate() {
                    assert_eq!(
                        wt(j, &next).unwrap(),
                        w - sign * cd.a(j, k),
                        "n={n} j={j} k={k}"
                    );
                }
                trail.push((k, lower));
                b = next;
            }
            for (k, lower) in trail.into_iter().rev() {
                b = if lower {
                    e_op(k, &b).unwrap().unwrap()
                } else {
                    f_op(k, &b).unwrap().unwrap()
                };
            }
            assert_eq!(b, CrystalElt::infinite_zero(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn node_index_checked() {
        let b = CrystalElt::infinite_zero(2).unwrap();
        assert!(f_op(3, &b).is_err());
        assert!(eps(5, &b).is_err());
    }
}

//! The second fundamental module of the affine algebra of rank n.
//!
//! The module has basis {(i,j) : 1 <= i < j <= n+1}. The lowering operator
//! f_k advances one entry of the label along the cyclic index order, and
//! f_k^2 = 0, which makes the one-parameter operators
//! Y_k(c) = (1 + f_k/c) alpha_k^vee(c) polynomial in 1/c. Applying a fixed
//! word of Y-operators to a highest-weight unit vector produces the two
//! torus charts used throughout the crate; their coefficients admit the
//! closed forms implemented at the bottom of this file.

use std::collections::BTreeMap;

use num::BigRational;

use crate::error::{Error, Result};
use crate::geom::TorusPoint;
use crate::scalar::Scalar;

/// Basis label (i, j) with 1 <= i < j <= n+1. Ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisLabel {
    pub i: usize,
    pub j: usize,
}

impl BasisLabel {
    pub fn new(i: usize, j: usize, n: usize) -> Result<Self> {
        if i >= 1 && i < j && j <= n + 1 {
            Ok(BasisLabel { i, j })
        } else {
            Err(Error::InvalidLabel { i, j, max: n + 1 })
        }
    }
}

impl std::fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// All labels in lexicographic order; there are n(n+1)/2 of them.
pub fn basis_labels(n: usize) -> Vec<BasisLabel> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 1..=n {
        for j in (i + 1)..=(n + 1) {
            out.push(BasisLabel { i, j });
        }
    }
    out
}

/// Pairing of the weight of basis vector (i,j) with the k-th simple coroot.
/// The weight is a sum of four fundamental-weight terms with indices i, i-1,
/// j, j-1, all read modulo n+1 (so index n+1 is index 0).
pub fn weight_pairing(label: BasisLabel, k: usize, n: usize) -> i64 {
    let m = n + 1;
    let delta = |a: usize| -> i64 {
        (a % m == k % m) as i64
    };
    delta(label.i) - delta(label.i - 1) + delta(label.j) - delta(label.j - 1)
}

/// Image label of (i,j) under f_k, or None when f_k kills the basis vector.
///
/// For 1 <= k <= n the label entry equal to k advances by one, except that
/// advancing i into j is forbidden. f_0 sends (i, n+1) to (1, i) for i != 1.
pub fn f_label(k: usize, label: BasisLabel, n: usize) -> Option<BasisLabel> {
    let BasisLabel { i, j } = label;
    if k == 0 {
        return (i != 1 && j == n + 1).then_some(BasisLabel { i: 1, j: i });
    }
    if i == k && i < j - 1 {
        Some(BasisLabel { i: i + 1, j })
    } else if j == k {
        Some(BasisLabel { i, j: j + 1 })
    } else {
        None
    }
}

/// Image label of (i,j) under e_k; the transpose of [`f_label`].
///
/// e_0 is only nonzero on (1, j) with 2 <= j <= n, where it returns
/// (j, n+1).
pub fn e_label(k: usize, label: BasisLabel, n: usize) -> Option<BasisLabel> {
    let BasisLabel { i, j } = label;
    if k == 0 {
        return (i == 1 && j <= n).then_some(BasisLabel { i: j, j: n + 1 });
    }
    if i == k + 1 {
        Some(BasisLabel { i: i - 1, j })
    } else if i < j - 1 && j - 1 == k {
        Some(BasisLabel { i, j: j - 1 })
    } else {
        None
    }
}

/// A vector in the module: a sparse map from labels to scalars. Zero
/// coefficients are never stored, so support comparisons are exact equality.
#[derive(Debug, Clone, PartialEq)]
pub struct FundVector<S: Scalar> {
    n: usize,
    coeffs: BTreeMap<BasisLabel, S>,
}

impl<S: Scalar> FundVector<S> {
    pub fn zero(n: usize) -> Self {
        FundVector {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn unit(n: usize, label: BasisLabel) -> Result<Self> {
        BasisLabel::new(label.i, label.j, n)?;
        let mut v = Self::zero(n);
        v.coeffs.insert(label, S::one());
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, label: &BasisLabel) -> Option<&S> {
        self.coeffs.get(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisLabel, &S)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Adds `value` to the coefficient at `label`, dropping exact zeros.
    pub fn add_to(&mut self, label: BasisLabel, value: S) {
        if value.is_zero() {
            return;
        }
        match self.coeffs.remove(&label) {
            Some(old) => {
                let merged = old.add(&value);
                if !merged.is_zero() {
                    self.coeffs.insert(label, merged);
                }
            }
            None => {
                self.coeffs.insert(label, value);
            }
        }
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = Self::zero(self.n);
        for (lab, c) in &self.coeffs {
            out.add_to(*lab, c.mul(factor));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "coeffs": self
                .coeffs
                .iter()
                .map(|(lab, c)| {
                    serde_json::json!({"i": lab.i, "j": lab.j, "value": c.text()})
                })
                .collect::<Vec<_>>(),
        })
    }
}

fn check_index(k: usize, n: usize) -> Result<()> {
    if k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n });
    }
    Ok(())
}

/// Linear extension of f_k to vectors.
pub fn apply_f<S: Scalar>(k: usize, v: &FundVector<S>) -> Result<FundVector<S>> {
    check_index(k, v.n)?;
    let mut out = FundVector::zero(v.n);
    for (lab, c) in v.iter() {
        if let Some(target) = f_label(k, *lab, v.n) {
            out.add_to(target, c.clone());
        }
    }
    Ok(out)
}

/// Linear extension of e_k to vectors.
pub fn apply_e<S: Scalar>(k: usize, v: &FundVector<S>) -> Result<FundVector<S>> {
    check_index(k, v.n)?;
    let mut out = FundVector::zero(v.n);
    for (lab, c) in v.iter() {
        if let Some(target) = e_label(k, *lab, v.n) {
            out.add_to(target, c.clone());
        }
    }
    Ok(out)
}

/// Y_k(c) v: scale each coefficient by c^(coroot pairing of its label), then
/// add f_k of the scaled vector divided by c.
pub fn apply_y<S: Scalar>(k: usize, c: &S, v: &FundVector<S>) -> Result<FundVector<S>> {
    check_index(k, v.n)?;
    if c.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut scaled = FundVector::zero(v.n);
    for (lab, coeff) in v.iter() {
        let p = weight_pairing(*lab, k, v.n);
        scaled.add_to(*lab, coeff.mul(&c.powi(p)?));
    }
    let mut out = scaled.clone();
    for (lab, coeff) in scaled.iter() {
        if let Some(target) = f_label(k, *lab, v.n) {
            out.add_to(target, coeff.div(c)?);
        }
    }
    Ok(out)
}

/// Letters of the first chart word, leftmost operator first:
/// (n-1, n-2, ..., 1, n, n-1, ..., 2).
pub fn v1_letters(n: usize) -> Vec<usize> {
    let mut w: Vec<usize> = (1..=n - 1).rev().collect();
    w.extend((2..=n).rev());
    w
}

/// Parameter of the m-th letter (1-based) of the first chart word: x_{2n-m}.
pub fn v1_param_index(n: usize, m: usize) -> usize {
    2 * n - m
}

/// Letters of the second chart word, leftmost operator first:
/// (n-2, ..., 1, 0, n-1, ..., 1).
pub fn v2_letters(n: usize) -> Vec<usize> {
    let mut w: Vec<usize> = (0..=n - 2).rev().collect();
    w.extend((1..=n - 1).rev());
    w
}

/// Parameter of the m-th letter (1-based) of the second chart word:
/// y_{2n-1-m}.
pub fn v2_param_index(n: usize, m: usize) -> usize {
    2 * n - 1 - m
}

fn word_product<S: Scalar>(
    n: usize,
    letters: &[usize],
    params: &[S],
    start: BasisLabel,
) -> Result<FundVector<S>> {
    debug_assert_eq!(letters.len(), params.len());
    let mut v = FundVector::unit(n, start)?;
    // The rightmost operator in the word acts first.
    for (k, c) in letters.iter().zip(params.iter()).rev() {
        v = apply_y(*k, c, &v)?;
    }
    Ok(v)
}

/// First chart vector via the defining word product, over any scalar chart.
/// `x` maps coordinate index k (2 <= k <= 2n-1) to a scalar.
pub fn v1_from_chart<S: Scalar>(n: usize, x: &dyn Fn(usize) -> S) -> Result<FundVector<S>> {
    let letters = v1_letters(n);
    let params: Vec<S> = (1..=letters.len())
        .map(|m| x(v1_param_index(n, m)))
        .collect();
    word_product(n, &letters, &params, BasisLabel { i: 1, j: 2 })
}

/// Second chart vector via its word product. `y` maps coordinate index k
/// (1 <= k <= 2n-2) to a scalar.
pub fn v2_from_chart<S: Scalar>(n: usize, y: &dyn Fn(usize) -> S) -> Result<FundVector<S>> {
    let letters = v2_letters(n);
    let params: Vec<S> = (1..=letters.len())
        .map(|m| y(v2_param_index(n, m)))
        .collect();
    word_product(n, &letters, &params, BasisLabel { i: 1, j: n + 1 })
}

/// First chart vector at a rational point.
pub fn build_v1(pt: &TorusPoint) -> Result<FundVector<BigRational>> {
    pt.require_nonzero()?;
    v1_from_chart(pt.n(), &|k| pt.x(k).clone())
}

/// Second chart vector at a rational point (coordinates read as y_1..y_{2n-2}).
pub fn build_v2(pt: &TorusPoint) -> Result<FundVector<BigRational>> {
    pt.require_nonzero()?;
    v2_from_chart(pt.n(), &|k| pt.y(k).clone())
}

/// Closed-form coefficient of the first chart vector at a given label.
///
/// The three coefficient shapes: for j <= n the coefficient is a chain sum
/// (scaled by x_{n+j} when j < n), for j = n+1 it collapses to a single
/// coordinate, or to 1 at the lowest label (n, n+1).
pub fn x_coeff<S: Scalar>(n: usize, label: BasisLabel, x: &dyn Fn(usize) -> S) -> S {
    let BasisLabel { i, j } = label;
    debug_assert!(i >= 1 && i < j && j <= n + 1);
    if j == n + 1 {
        return if i == n { S::one() } else { x(n + i) };
    }
    // Chain sum x_{i+1} + sum_{t>=2} x_{i+t} x_{n+i} / x_{n+i+t-1}, t up to j-i.
    let mut acc = x(i + 1);
    for t in 2..=(j - i) {
        let term = x(i + t)
            .mul(&x(n + i))
            .div(&x(n + i + t - 1))
            .expect("chart scalars are nonzero");
        acc = acc.add(&term);
    }
    if j < n {
        acc = x(n + j).mul(&acc);
    }
    acc
}

/// Closed-form coefficient of the second chart vector at a given label.
pub fn y_coeff<S: Scalar>(n: usize, label: BasisLabel, y: &dyn Fn(usize) -> S) -> S {
    let BasisLabel { i, j } = label;
    debug_assert!(i >= 1 && i < j && j <= n + 1);
    let chain = |lo: usize, len: usize| -> S {
        // y_{lo+1} + sum_{t=2..=len} y_{lo+t} y_{n+lo} / y_{n+lo+t-1}
        let mut acc = y(lo + 1);
        for t in 2..=len {
            let term = y(lo + t)
                .mul(&y(n + lo))
                .div(&y(n + lo + t - 1))
                .expect("chart scalars are nonzero");
            acc = acc.add(&term);
        }
        acc
    };
    // The tail sum shared by the j = n+1 cases:
    // y_1 + sum_{t=2..=len} y_t y_n / y_{n+t-1}.
    let tail = |len: usize| -> S {
        let mut acc = y(1);
        for t in 2..=len {
            let term = y(t)
                .mul(&y(n))
                .div(&y(n + t - 1))
                .expect("chart scalars are nonzero");
            acc = acc.add(&term);
        }
        acc
    };
    match j {
        _ if j == n + 1 => match i {
            _ if i == n => y(n),
            _ if i == n - 1 => tail(n - 1),
            _ => y(n + i).mul(&tail(i)),
        },
        _ if j == n => {
            if i == n - 1 {
                S::one()
            } else {
                y(n + i)
            }
        }
        _ if j == n - 1 => chain(i, j - i),
        _ => y(n + j).mul(&chain(i, j - i)),
    }
}

/// All closed-form coefficients of the first chart vector at a point.
pub fn closed_form_x(pt: &TorusPoint) -> Result<FundVector<BigRational>> {
    pt.require_nonzero()?;
    let n = pt.n();
    let mut v = FundVector::zero(n);
    for lab in basis_labels(n) {
        v.add_to(lab, x_coeff(n, lab, &|k| pt.x(k).clone()));
    }
    Ok(v)
}

/// All closed-form coefficients of the second chart vector at a point.
pub fn closed_form_y(pt: &TorusPoint) -> Result<FundVector<BigRational>> {
    pt.require_nonzero()?;
    let n = pt.n();
    let mut v = FundVector::zero(n);
    for lab in basis_labels(n) {
        v.add_to(lab, y_coeff(n, lab, &|k| pt.y(k).clone()));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::PosExpr;
    use crate::scalar::{rational_from_i64, rational_from_text, random_pos_rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(v: i64) -> num::BigRational {
        rational_from_i64(v)
    }

    fn lab(i: usize, j: usize) -> BasisLabel {
        BasisLabel { i, j }
    }

    #[test]
    fn label_enumeration() {
        assert_eq!(basis_labels(2), vec![lab(1, 2), lab(1, 3), lab(2, 3)]);
        assert_eq!(basis_labels(3).len(), 6);
        assert_eq!(basis_labels(5).len(), 15);
        let labels = basis_labels(4);
        assert!(labels.windows(2).all(|w| w[0] < w[1]));
        assert!(BasisLabel::new(2, 2, 3).is_err());
        assert!(BasisLabel::new(1, 5, 3).is_err());
    }

    #[test]
    fn weight_pairing_values() {
        assert_eq!(weight_pairing(lab(1, 2), 2, 2), 1);
        assert_eq!(weight_pairing(lab(1, 2), 0, 2), -1);
        assert_eq!(weight_pairing(lab(1, 4), 0, 3), 0);
        // (i, n+1) with i > 1 pairs to +1 with the zeroth coroot,
        // matching the domain of f_0.
        assert_eq!(weight_pairing(lab(2, 4), 0, 3), 1);
    }

    #[test]
    fn operator_action_on_labels() {
        assert_eq!(f_label(2, lab(1, 2), 2), Some(lab(1, 3)));
        assert_eq!(f_label(1, lab(1, 2), 2), None);
        assert_eq!(f_label(0, lab(2, 3), 2), Some(lab(1, 2)));
        assert_eq!(f_label(0, lab(1, 3), 2), None);
        assert_eq!(e_label(0, lab(1, 2), 2), Some(lab(2, 3)));
        assert_eq!(e_label(0, lab(1, 3), 2), None);
        assert_eq!(e_label(1, lab(2, 3), 2), Some(lab(1, 3)));
    }

    #[test]
    fn e_and_f_are_transpose() {
        for n in 2..=5 {
            for k in 0..=n {
                for u in basis_labels(n) {
                    for v in basis_labels(n) {
                        let forward = f_label(k, u, n) == Some(v);
                        let back = e_label(k, v, n) == Some(u);
                        assert_eq!(forward, back, "n={n} k={k} u={u} v={v}");
                    }
                }
            }
        }
    }

    #[test]
    fn f_squared_vanishes() {
        for n in 2..=5 {
            for k in 0..=n {
                for u in basis_labels(n) {
                    if let Some(v) = f_label(k, u, n) {
                        assert_eq!(f_label(k, v, n), None, "n={n} k={k} u={u}");
                    }
                }
            }
        }
    }

    #[test]
    fn f_drops_weight_by_two() {
        for n in 2..=5 {
            for k in 0..=n {
                for u in basis_labels(n) {
                    if let Some(v) = f_label(k, u, n) {
                        assert_eq!(
                            weight_pairing(v, k, n),
                            weight_pairing(u, k, n) - 2,
                            "n={n} k={k} u={u}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn y_operator_small_steps() {
        // Y_2(x2) (1,2) = x2 (1,2) + (1,3), then Y_1(x3) of that adds (2,3).
        let x2 = q(7);
        let x3 = q(11);
        let v = FundVector::<num::BigRational>::unit(2, lab(1, 2)).unwrap();
        let step1 = apply_y(2, &x2, &v).unwrap();
        assert_eq!(step1.get(&lab(1, 2)), Some(&q(7)));
        assert_eq!(step1.get(&lab(1, 3)), Some(&q(1)));
        assert_eq!(step1.support_len(), 2);
        let step2 = apply_y(1, &x3, &step1).unwrap();
        assert_eq!(step2.get(&lab(1, 2)), Some(&q(7)));
        assert_eq!(step2.get(&lab(1, 3)), Some(&q(11)));
        assert_eq!(step2.get(&lab(2, 3)), Some(&q(1)));
    }

    #[test]
    fn chart_words() {
        assert_eq!(v1_letters(2), vec![1, 2]);
        assert_eq!(v1_letters(4), vec![3, 2, 1, 4, 3, 2]);
        assert_eq!(v2_letters(2), vec![0, 1]);
        assert_eq!(v2_letters(4), vec![2, 1, 0, 3, 2, 1]);
        assert_eq!(v1_param_index(3, 1), 5);
        assert_eq!(v1_param_index(3, 4), 2);
        assert_eq!(v2_param_index(3, 2), 3);
    }

    #[test]
    fn closed_forms_rank_two_symbolic() {
        // The rank-two closed forms are single variables; over expression
        // scalars they come out verbatim. (The word product itself carries
        // uncancelled factors like x2/x2, so only its value is compared,
        // in the random-point test below.)
        let sym = |k: usize| PosExpr::x(k);
        assert_eq!(x_coeff(2, lab(1, 2), &sym).text(), "x2");
        assert_eq!(x_coeff(2, lab(1, 3), &sym).text(), "x3");
        assert_eq!(x_coeff(2, lab(2, 3), &sym).text(), "1/1");
        assert_eq!(y_coeff(2, lab(1, 2), &sym).text(), "1/1");
        assert_eq!(y_coeff(2, lab(1, 3), &sym).text(), "x1");
        assert_eq!(y_coeff(2, lab(2, 3), &sym).text(), "x2");
    }

    #[test]
    fn chart_vector_rank_three_fixed_point() {
        // x = (x2,x3,x4,x5) = (1,2,3,4), coefficients computed by hand from
        // the word product.
        let pt = TorusPoint::new(3, vec![q(1), q(2), q(3), q(4)]).unwrap();
        let v = build_v1(&pt).unwrap();
        assert_eq!(v.get(&lab(1, 2)), Some(&q(4)));
        assert_eq!(v.get(&lab(1, 3)), Some(&rational_from_text("5/2").unwrap()));
        assert_eq!(v.get(&lab(1, 4)), Some(&q(3)));
        assert_eq!(v.get(&lab(2, 3)), Some(&q(2)));
        assert_eq!(v.get(&lab(2, 4)), Some(&q(4)));
        assert_eq!(v.get(&lab(3, 4)), Some(&q(1)));

        let cf = closed_form_x(&pt).unwrap();
        assert_eq!(v, cf);
    }

    #[test]
    fn charts_match_closed_forms_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
        for n in 2..=5 {
            for _ in 0..25 {
                let coords: Vec<_> = (0..2 * n - 2)
                    .map(|_| random_pos_rational(&mut rng))
                    .collect();
                let pt = TorusPoint::new(n, coords).unwrap();
                assert_eq!(build_v1(&pt).unwrap(), closed_form_x(&pt).unwrap(), "n={n}");
                assert_eq!(build_v2(&pt).unwrap(), closed_form_y(&pt).unwrap(), "n={n}");
            }
        }
    }

    #[test]
    fn full_support_at_positive_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let coords: Vec<_> = (0..6).map(|_| random_pos_rational(&mut rng)).collect();
        let pt = TorusPoint::new(4, coords).unwrap();
        assert_eq!(build_v1(&pt).unwrap().support_len(), 10);
        assert_eq!(build_v2(&pt).unwrap().support_len(), 10);
    }

    #[test]
    fn json_shape() {
        let v = FundVector::<num::BigRational>::unit(2, lab(1, 3)).unwrap();
        let js = v.to_json();
        assert_eq!(
            js,
            serde_json::json!({"n": 2, "coeffs": [{"i": 1, "j": 3, "value": "1/1"}]})
        );
    }

    #[test]
    fn rejects_bad_indices_and_zero_scale() {
        let v = FundVector::<num::BigRational>::unit(2, lab(1, 2)).unwrap();
        assert!(apply_f(3, &v).is_err());
        assert!(apply_y(1, &q(0), &v).is_err());
    }
}

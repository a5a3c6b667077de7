//! Fincke-Pohst enumeration of short vectors of a positive definite
//! quaternary rational form, with exact pruning.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, ToPrimitive, Zero};

use crate::rational::Rational;

const DIM: usize = 4;

/// Arithmetic overflowed the fixed-width fast path.
struct Overflow;

trait Exact: Clone + Ord + Zero + One + CheckedAdd + CheckedSub + CheckedMul + ToPrimitive {
    fn checked_div(&self, other: &Self) -> Option<Self>;
    fn from_i64(x: i64) -> Self;
    /// Nearest integer, ties rounded up.
    fn round_i64(&self) -> Option<i64>;
}

impl<T> Exact for Ratio<T>
where
    T: Clone + Integer + CheckedAdd + CheckedSub + CheckedMul + From<i64> + ToPrimitive,
    Ratio<T>: ToPrimitive,
{
    fn checked_div(&self, other: &Self) -> Option<Self> {
        num_traits::CheckedDiv::checked_div(self, other)
    }
    fn from_i64(x: i64) -> Self {
        Ratio::from_integer(T::from(x))
    }
    fn round_i64(&self) -> Option<i64> {
        let two = T::from(2);
        let n = self.numer().checked_mul(&two)?.checked_add(self.denom())?;
        n.div_floor(&self.denom().checked_mul(&two)?).to_i64()
    }
}

fn sub<T: Exact>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_sub(b).ok_or(Overflow)
}
fn mul<T: Exact>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_mul(b).ok_or(Overflow)
}

/// `G = L D L^T`; `Ok(None)` when `G` is not positive definite.
fn ldlt<T: Exact>(g: &[Vec<T>]) -> Result<Option<(Vec<Vec<T>>, Vec<T>)>, Overflow> {
    let n = g.len();
    let mut l = vec![vec![T::zero(); n]; n];
    let mut d = vec![T::zero(); n];
    for j in 0..n {
        let mut dj = g[j][j].clone();
        for k in 0..j {
            dj = sub(&dj, &mul(&mul(&l[j][k], &l[j][k])?, &d[k])?)?;
        }
        if dj <= T::zero() {
            return Ok(None);
        }
        l[j][j] = T::one();
        for i in (j + 1)..n {
            let mut s = g[i][j].clone();
            for k in 0..j {
                s = sub(&s, &mul(&mul(&l[i][k], &l[j][k])?, &d[k])?)?;
            }
            l[i][j] = s.checked_div(&dj).ok_or(Overflow)?;
        }
        d[j] = dj;
    }
    Ok(Some((l, d)))
}

/// LLL reduction (`delta = 3/4`) of a positive definite Gram matrix.
/// Returns the unimodular basis `B` (rows) and `B G B^T`; `Ok(None)` when
/// `G` is not positive definite.
#[allow(clippy::type_complexity)]
fn lll<T: Exact>(g: &[Vec<T>]) -> Result<Option<(Vec<[i64; DIM]>, Vec<Vec<T>>)>, Overflow> {
    let n = g.len();
    let mut gram = g.to_vec();
    let mut basis: Vec<[i64; DIM]> = (0..n)
        .map(|i| std::array::from_fn(|j| i64::from(i == j)))
        .collect();
    let delta = T::from_i64(3).checked_div(&T::from_i64(4)).ok_or(Overflow)?;
    let Some((mut l, mut d)) = ldlt(&gram)? else {
        return Ok(None);
    };
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let q = l[k][j].round_i64().ok_or(Overflow)?;
            if q == 0 {
                continue;
            }
            for c in 0..n {
                basis[k][c] = basis[j][c]
                    .checked_mul(q)
                    .and_then(|x| basis[k][c].checked_sub(x))
                    .ok_or(Overflow)?;
            }
            let qt = T::from_i64(q);
            for c in 0..n {
                gram[k][c] = sub(&gram[k][c], &mul(&qt, &gram[j][c])?)?;
            }
            for r in 0..n {
                gram[r][k] = sub(&gram[r][k], &mul(&qt, &gram[r][j])?)?;
            }
            (l, d) = ldlt(&gram)?.ok_or(Overflow)?;
        }
        let mu2 = mul(&l[k][k - 1], &l[k][k - 1])?;
        if d[k] < mul(&sub(&delta, &mu2)?, &d[k - 1])? {
            basis.swap(k, k - 1);
            gram.swap(k, k - 1);
            for row in gram.iter_mut() {
                row.swap(k, k - 1);
            }
            (l, d) = ldlt(&gram)?.ok_or(Overflow)?;
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    Ok(Some((basis, gram)))
}

trait ExactInt: Clone + Ord + Integer + CheckedAdd + CheckedSub + CheckedMul + ToPrimitive + From<i64> {}
impl<I> ExactInt for I where I: Clone + Ord + Integer + CheckedAdd + CheckedSub + CheckedMul + ToPrimitive + From<i64> {}

fn iadd<I: ExactInt>(a: &I, b: &I) -> Result<I, Overflow> {
    a.checked_add(b).ok_or(Overflow)
}
fn isub<I: ExactInt>(a: &I, b: &I) -> Result<I, Overflow> {
    a.checked_sub(b).ok_or(Overflow)
}
fn imul<I: ExactInt>(a: &I, b: &I) -> Result<I, Overflow> {
    a.checked_mul(b).ok_or(Overflow)
}

/// The enumeration with every level rescaled to integers:
/// `Q(x) * den = sum_j weight_j * (scale_j * x_j - sum_{i>j} coef_ij x_i)^2`.
struct Enumerator<I> {
    coef: Vec<Vec<I>>,
    scale: Vec<I>,
    weight: Vec<I>,
    x: [i64; DIM],
    out: Vec<([i64; DIM], I)>,
    total: I,
}

impl<I: ExactInt> Enumerator<I> {
    fn descend(&mut self, level: usize, remaining: I) -> Result<(), Overflow> {
        let mut center = I::zero();
        for i in (level + 1)..DIM {
            if self.x[i] != 0 {
                center = iadd(&center, &imul(&self.coef[i][level], &I::from(self.x[i]))?)?;
            }
        }
        let m = &self.scale[level].clone();
        let w = &self.weight[level].clone();
        let mf = m.to_f64().unwrap_or(1.0);
        let c = center.to_f64().unwrap_or(0.0) / mf;
        let r = (remaining.to_f64().unwrap_or(f64::MAX) / w.to_f64().unwrap_or(f64::MIN_POSITIVE))
            .max(0.0)
            .sqrt()
            / mf;
        // the float range only seeds the scan; membership is decided exactly
        let lo = (c - r).floor() as i64 - 1;
        let hi = (c + r).ceil() as i64 + 1;
        for xi in lo..=hi {
            let diff = isub(&imul(m, &I::from(xi))?, &center)?;
            let term = imul(&imul(w, &diff)?, &diff)?;
            if term > remaining {
                continue;
            }
            self.x[level] = xi;
            let rest = isub(&remaining, &term)?;
            if level == 0 {
                if self.x != [0; DIM] && is_canonical(&self.x) {
                    let value = isub(&self.total, &rest)?;
                    self.out.push((self.x, value));
                }
            } else {
                self.descend(level - 1, rest)?;
            }
        }
        self.x[level] = 0;
        Ok(())
    }
}

fn is_canonical(v: &[i64; DIM]) -> bool {
    v.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}

type Short<I> = Option<Vec<([i64; DIM], Ratio<I>)>>;

fn short_vectors_in<I: ExactInt>(gram: &[Vec<Ratio<I>>], bound: &Ratio<I>) -> Result<Short<I>, Overflow>
where
    Ratio<I>: Exact,
{
    let Some((l, d)) = ldlt(gram)? else {
        return Ok(None);
    };
    // center_j = -sum_{i>j} l_ij x_i, cleared by scale_j
    let mut scale = Vec::with_capacity(DIM);
    let mut coef = vec![vec![I::zero(); DIM]; DIM];
    for j in 0..DIM {
        let m = ((j + 1)..DIM).fold(I::one(), |acc, i| acc.lcm(l[i][j].denom()));
        for i in (j + 1)..DIM {
            let scaled = mul(&l[i][j], &Ratio::from_integer(m.clone()))?;
            coef[i][j] = isub(&I::zero(), &scaled.to_integer())?;
        }
        scale.push(m);
    }
    // d_j * (x_j - center_j)^2 = (d_j / scale_j^2) * (scale_j x_j - C_j)^2
    let per_level: Vec<Ratio<I>> = (0..DIM)
        .map(|j| {
            let m2 = imul(&scale[j], &scale[j])?;
            d[j].checked_div(&Ratio::from_integer(m2)).ok_or(Overflow)
        })
        .collect::<Result<_, _>>()?;
    let den = per_level
        .iter()
        .fold(bound.denom().clone(), |acc, r| acc.lcm(r.denom()));
    let den_r = Ratio::from_integer(den.clone());
    let weight = per_level
        .iter()
        .map(|r| Ok(mul(r, &den_r)?.to_integer()))
        .collect::<Result<Vec<I>, Overflow>>()?;
    let total = mul(bound, &den_r)?.to_integer();
    let mut e = Enumerator {
        coef,
        scale,
        weight,
        x: [0; DIM],
        out: Vec::new(),
        total: total.clone(),
    };
    e.descend(DIM - 1, total)?;
    Ok(Some(
        e.out
            .into_iter()
            .map(|(x, v)| (x, Ratio::new(v, den.clone())))
            .collect(),
    ))
}

/// LLL-reduces, enumerates in the reduced basis and maps back to the
/// input coordinates.
fn reduced_short_vectors<I: ExactInt>(gram: &[Vec<Ratio<I>>], bound: &Ratio<I>) -> Result<Short<I>, Overflow>
where
    Ratio<I>: Exact,
{
    let Some((basis, reduced)) = lll(gram)? else {
        return Ok(None);
    };
    let Some(found) = short_vectors_in(&reduced, bound)? else {
        return Ok(None);
    };
    let mut out = Vec::with_capacity(found.len());
    for (v, val) in found {
        let mut x = [0i64; DIM];
        for (&vi, row) in v.iter().zip(&basis) {
            for (xc, &bc) in x.iter_mut().zip(row) {
                *xc = vi
                    .checked_mul(bc)
                    .and_then(|t| xc.checked_add(t))
                    .ok_or(Overflow)?;
            }
        }
        if !is_canonical(&x) {
            x = x.map(|c| -c);
        }
        out.push((x, val));
    }
    Ok(Some(out))
}

fn to_small(r: &Rational) -> Option<Ratio<i128>> {
    Some(Ratio::new_raw(r.numer().to_i128()?, r.denom().to_i128()?))
}

fn from_small(r: &Ratio<i128>) -> Rational {
    Rational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// All nonzero `v` with `v^T G v <= bound`, one per `+-` pair (leading
/// nonzero coordinate positive), sorted by value then coordinates.
/// Returns `None` when `G` is not positive definite.
///
/// The Gram matrix is LLL-reduced first so the search tree stays small on
/// skewed forms. Runs on 128-bit fractions when the data fit and falls back
/// to arbitrary precision on overflow.
pub fn short_vectors(gram: &[Vec<Rational>], bound: &Rational) -> Option<Vec<([i64; DIM], Rational)>> {
    assert_eq!(gram.len(), DIM);
    let small_gram: Option<Vec<Vec<Ratio<i128>>>> =
        gram.iter().map(|row| row.iter().map(to_small).collect()).collect();
    let fast = match (small_gram, to_small(bound)) {
        (Some(g), Some(b)) => match reduced_short_vectors(&g, &b) {
            Ok(res) => Some(res.map(|v| {
                v.into_iter()
                    .map(|(x, val)| (x, from_small(&val)))
                    .collect::<Vec<_>>()
            })),
            Err(Overflow) => None,
        },
        _ => None,
    };
    let res = match fast {
        Some(res) => res,
        None => match reduced_short_vectors(gram, bound) {
            Ok(res) => res,
            Err(Overflow) => panic!("lattice vector coordinates exceed 64 bits"),
        },
    };
    res.map(|mut out| {
        out.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
        out
    })
}

/// The minimum of `G` on `Z^4 \ {0}` and its minimal vectors up to sign.
pub fn minimal_vectors(gram: &[Vec<Rational>]) -> Option<(Rational, Vec<[i64; DIM]>)> {
    let bound = (0..DIM).map(|i| gram[i][i].clone()).min()?;
    minimal_vectors_with_hint(gram, &bound)
}

/// As [`minimal_vectors`], first trying `hint` as the enumeration radius.
/// The diagonal bound is used when nothing lies below `hint`.
pub fn minimal_vectors_with_hint(gram: &[Vec<Rational>], hint: &Rational) -> Option<(Rational, Vec<[i64; DIM]>)> {
    let mut all = short_vectors(gram, hint)?;
    if all.is_empty() {
        let bound = (0..DIM).map(|i| gram[i][i].clone()).min()?;
        all = short_vectors(gram, &bound)?;
    }
    let minimum = all.first()?.1.clone();
    let vectors = all
        .into_iter()
        .take_while(|(_, v)| *v == minimum)
        .map(|(v, _)| v)
        .collect();
    Some((minimum, vectors))
}

//! Random instance generators and independent oracles shared by the
//! integration tests.
#![allow(dead_code)]

use destab_core::cone::InnerProduct;
use destab_core::gauge::{Node, SubobjectLattice};
use destab_core::linalg::RationalMatrix;
use destab_core::rational::{frac, int, to_f64, Rational};
use destab_core::torus::{SupportVector, TorusAction, Weight, WeightSystem};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational in `[−bound, bound]` with denominator 1, 2 or 3.
pub fn small_rational(rng: &mut impl Rng, bound: i64) -> Rational {
    let q = rng.random_range(1..=3i64);
    let p = rng.random_range(-bound * q..=bound * q);
    frac(p, q)
}

pub fn positive_rational(rng: &mut impl Rng) -> Rational {
    frac(rng.random_range(1..=12), rng.random_range(1..=4))
}

/// `LᵀL + I` or a positive diagonal, with small integer entries.
pub fn random_metric(rng: &mut impl Rng, n: usize) -> InnerProduct {
    if rng.random_bool(0.3) {
        return InnerProduct::identity(n);
    }
    if rng.random_bool(0.5) {
        let d: Vec<Rational> = (0..n).map(|_| int(rng.random_range(1..=4))).collect();
        return InnerProduct::diagonal(&d).unwrap();
    }
    let l: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(-2..=2)).collect()).collect();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s: i64 = (0..n).map(|k| l[k][i] * l[k][j]).sum();
                    int(s + i64::from(i == j))
                })
                .collect()
        })
        .collect();
    InnerProduct::new(RationalMatrix::from_rows(rows, n).unwrap()).unwrap()
}

pub struct TorusInstance {
    pub action: TorusAction,
    pub point: SupportVector,
}

/// Random instance with `n ≤ 4`, `|R| ≤ 8` and rational data in `[−3, 3]`.
pub fn random_torus(rng: &mut impl Rng) -> TorusInstance {
    loop {
        let n = rng.random_range(1..=4usize);
        let count = rng.random_range(1..=8usize);
        let mut weights: Vec<Weight> = Vec::new();
        for i in 0..count {
            let chi: Vec<Rational> = (0..n).map(|_| small_rational(rng, 3)).collect();
            if chi.iter().all(Zero::is_zero) || weights.iter().any(|w| w.chi == chi) {
                continue;
            }
            weights.push(Weight::new(format!("w{i}"), chi));
        }
        if weights.is_empty() {
            continue;
        }
        let tau: Vec<Rational> = (0..n).map(|_| small_rational(rng, 3)).collect();
        let ws = WeightSystem::new(n, weights.clone()).unwrap();
        let action = TorusAction::new(ws, tau, random_metric(rng, n)).unwrap();
        let mut components: Vec<(String, Rational)> = Vec::new();
        for w in &weights {
            if rng.random_bool(0.6) {
                components.push((w.label.clone(), positive_rational(rng)));
            }
        }
        let point = SupportVector::new(components).unwrap();
        return TorusInstance { action, point };
    }
}

pub fn random_unstable_torus(rng: &mut impl Rng) -> TorusInstance {
    loop {
        let inst = random_torus(rng);
        if !inst.action.optimal_destabilizing(&inst.point).unwrap().is_semistable() {
            return inst;
        }
    }
}

pub fn random_invertible(rng: &mut impl Rng, n: usize) -> RationalMatrix {
    loop {
        let rows: Vec<Vec<Rational>> = (0..n).map(|_| (0..n).map(|_| int(rng.random_range(-3..=3))).collect()).collect();
        let m = RationalMatrix::from_rows(rows, n).unwrap();
        if m.rank() == n {
            return m;
        }
    }
}

/// A signed permutation matrix, which is orthogonal.
pub fn random_signed_permutation(rng: &mut impl Rng, n: usize) -> RationalMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut m = RationalMatrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        m[(i, j)] = int(if rng.random_bool(0.5) { 1 } else { -1 });
    }
    m
}

/// `r₀ × r` matrix with entries in `[−5, 5]` and kernel of dimension exactly
/// `k`: `r − k` independent columns plus `k` columns combined from them.
pub fn matrix_with_kernel(rng: &mut impl Rng, r0: usize, r: usize, k: usize) -> RationalMatrix {
    let rank = r - k;
    assert!(rank <= r0);
    loop {
        let base: Vec<Vec<i64>> = (0..rank).map(|_| (0..r0).map(|_| rng.random_range(-5..=5)).collect()).collect();
        let mut columns = base.clone();
        for _ in 0..k {
            let coeffs: Vec<i64> = (0..rank).map(|_| rng.random_range(-1..=1)).collect();
            let col: Vec<i64> = (0..r0).map(|i| (0..rank).map(|j| coeffs[j] * base[j][i]).sum()).collect();
            columns.push(col);
        }
        if columns.iter().flatten().any(|x| x.abs() > 5) {
            continue;
        }
        columns.shuffle(rng);
        let cols: Vec<Vec<Rational>> = columns.iter().map(|c| c.iter().map(|&x| int(x)).collect()).collect();
        let m = RationalMatrix::from_columns(&cols, r0).unwrap();
        if m.rank() == rank {
            return m;
        }
    }
}

/// A distributive lattice of subsets of `{0, …, n−1}` with additive rank
/// and degree. `phi = Some(P)` flags every member containing `P`.
#[derive(Debug, Clone)]
pub struct SetLattice {
    pub ranks: Vec<u32>,
    pub degrees: Vec<i64>,
    pub family: Vec<u32>,
    pub phi: Option<u32>,
}

impl SetLattice {
    pub fn new(elements: &[(u32, i64)], members: &[u32], phi: Option<u32>) -> Self {
        let n = elements.len();
        let full = (1u32 << n) - 1;
        let mut family = vec![0, full];
        family.extend_from_slice(members);
        close(&mut family);
        Self {
            ranks: elements.iter().map(|e| e.0).collect(),
            degrees: elements.iter().map(|e| e.1).collect(),
            family,
            phi,
        }
    }

    pub fn full(&self) -> u32 {
        (1u32 << self.ranks.len()) - 1
    }

    pub fn rank(&self, x: u32) -> i64 {
        (0..self.ranks.len()).filter(|i| x & (1 << i) != 0).map(|i| i64::from(self.ranks[i])).sum()
    }

    pub fn degree(&self, x: u32) -> i64 {
        (0..self.ranks.len()).filter(|i| x & (1 << i) != 0).map(|i| self.degrees[i]).sum()
    }

    pub fn label(x: u32) -> String {
        if x == 0 {
            return "0".into();
        }
        (0..26u8).filter(|i| x & (1 << i) != 0).map(|i| (b'a' + i) as char).collect()
    }

    pub fn to_lattice(&self) -> SubobjectLattice {
        let nodes = self
            .family
            .iter()
            .map(|&x| {
                let flagged = self.phi.is_some_and(|p| p & x == p);
                Node::new(Self::label(x), self.rank(x) as u32, self.degree(x), flagged)
            })
            .collect();
        let mut order = Vec::new();
        for &a in &self.family {
            for &b in &self.family {
                if a != b && a & b == a {
                    order.push((Self::label(a), Self::label(b)));
                }
            }
        }
        SubobjectLattice::new(nodes, &order).unwrap()
    }

    /// `(b − a)` slope compared by cross-multiplication, `a ⊊ b`.
    fn cmp_slopes(&self, (a, b): (u32, u32), (c, d): (u32, u32)) -> std::cmp::Ordering {
        let (r1, d1) = (self.rank(b) - self.rank(a), self.degree(b) - self.degree(a));
        let (r2, d2) = (self.rank(d) - self.rank(c), self.degree(d) - self.degree(c));
        (d1 * r2).cmp(&(d2 * r1))
    }

    fn strictly_between(&self, a: u32, b: u32) -> impl Iterator<Item = u32> + '_ {
        self.family
            .iter()
            .copied()
            .filter(move |&x| x != a && x != b && a & x == a && x & b == x)
    }

    /// All chains `∅ ⊊ c_1 ⊊ ⋯ ⊊ full` with strictly decreasing slopes and
    /// semistable subquotients, as label lists.
    pub fn hn_chains(&self) -> Vec<Vec<String>> {
        let mut out = Vec::new();
        let mut path = vec![0u32];
        self.walk(&mut path, &mut out);
        out
    }

    fn walk(&self, path: &mut Vec<u32>, out: &mut Vec<Vec<String>>) {
        let cur = *path.last().unwrap();
        if cur == self.full() {
            let ok_slopes = path
                .windows(3)
                .all(|w| self.cmp_slopes((w[0], w[1]), (w[1], w[2])) == std::cmp::Ordering::Greater);
            let ok_quotients = path.windows(2).all(|w| {
                self.strictly_between(w[0], w[1])
                    .all(|x| self.cmp_slopes((w[0], x), (w[0], w[1])) != std::cmp::Ordering::Greater)
            });
            if ok_slopes && ok_quotients {
                out.push(path[1..].iter().map(|&x| Self::label(x)).collect());
            }
            return;
        }
        for &x in &self.family {
            if x != cur && cur & x == cur {
                path.push(x);
                self.walk(path, out);
                path.pop();
            }
        }
    }
}

fn close(family: &mut Vec<u32>) {
    loop {
        let mut added = false;
        let snapshot = family.clone();
        for &a in &snapshot {
            for &b in &snapshot {
                for x in [a | b, a & b] {
                    if !family.contains(&x) {
                        family.push(x);
                        added = true;
                    }
                }
            }
        }
        if !added {
            break;
        }
    }
    family.sort_by_key(|&x| (x.count_ones(), x));
    family.dedup();
}

/// Random distributive lattice with at most `max_nodes` members.
pub fn random_set_lattice(rng: &mut impl Rng, max_nodes: usize, with_phi: bool) -> SetLattice {
    loop {
        let n = rng.random_range(1..=4usize);
        let elements: Vec<(u32, i64)> = (0..n).map(|_| (rng.random_range(1..=3), rng.random_range(-6..=6))).collect();
        let full = (1u32 << n) - 1;
        let members: Vec<u32> = (0..rng.random_range(0..=4)).map(|_| rng.random_range(0..=full)).collect();
        let phi = with_phi.then(|| rng.random_range(0..=full));
        let lattice = SetLattice::new(&elements, &members, phi);
        if lattice.family.len() <= max_nodes {
            return lattice;
        }
    }
}

/// Standard Gaussian vector in `ℝⁿ`.
pub fn gaussian(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    use rand_distr::{Distribution, StandardNormal};
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn f64_matrix(m: &RationalMatrix) -> Vec<Vec<f64>> {
    m.to_rows().iter().map(|r| r.iter().map(to_f64).collect()).collect()
}

pub fn f64_vec(v: &[Rational]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

pub fn dot_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn quad_f64(q: &[Vec<f64>], v: &[f64]) -> f64 {
    q.iter().zip(v).map(|(row, x)| x * dot_f64(row, v)).sum()
}

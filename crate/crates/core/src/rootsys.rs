//! Root systems of types A, B, C, D and G₂, their Weyl groups, and the
//! coordinate conventions for the spectral parameter λ.
use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::q::{q, qf, Q};
use crate::symexpr::LinForm;
use crate::var::Var;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Family {
    A,
    B,
    C,
    D,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::G => "G",
        })
    }
}

pub type Vector = Vec<Q>;

#[derive(Clone, Debug, PartialEq)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    pub dim: usize,
    pub simple: Vec<Vector>,
    /// Sorted by height, then lexicographically.
    pub positive: Vec<Vector>,
    pub rho: Vector,
    /// Free coordinates of λ.
    pub vars: Vec<Var>,
    /// λ written in ambient coordinates as forms in `vars`.
    pub lambda: Vec<LinForm>,
    pub convention: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeylElement {
    /// Reduced word: w = s_{word[0]} s_{word[1]} ⋯ (0-based simple indices).
    pub word: Vec<usize>,
    /// Row-major dim × dim matrix.
    pub matrix: Vec<Q>,
    pub dim: usize,
}

/// A maximal parabolic, given by the removed simple root α_P.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicDescriptor {
    pub removed: usize,
    pub retained: Vec<usize>,
    pub name: String,
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn coroot(a: &[Q]) -> Vector {
    let n = dot(a, a);
    a.iter().map(|x| x * q(2) / &n).collect()
}

fn unit(dim: usize, i: usize) -> Vector {
    (0..dim).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
}

fn vsub(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn vadd(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vscale(a: &[Q], k: &Q) -> Vector {
    a.iter().map(|x| x * k).collect()
}

/// Reflection of v in the hyperplane orthogonal to α.
pub fn reflect(v: &[Q], alpha: &[Q]) -> Vector {
    let c = dot(v, &coroot(alpha));
    vsub(v, &vscale(alpha, &c))
}

/// Solves the square system M x = b over Q (M invertible).
fn solve(mut m: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        b.swap(col, piv);
        let inv = m[col][col].recip();
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] * &inv;
                for c in col..n {
                    let d = &f * &m[col][c];
                    m[r][c] -= d;
                }
                let d = &f * &b[col];
                b[r] -= d;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &m[i][i]).collect())
}

fn zvars(n: usize) -> Vec<Var> {
    (1..=n).map(|i| Var::new(alloc::format!("z{i}"))).collect()
}

/// A generic vector in the span of the roots, with coordinates named
/// `prefix1..prefixR`, using the same convention as λ.
pub fn generic_vector(rs: &RootSystem, names: &[Var]) -> Vec<LinForm> {
    match rs.family {
        Family::A => {
            let mut v: Vec<LinForm> = names.iter().map(|n| LinForm::var(n.clone())).collect();
            let last = v.iter().fold(LinForm::zero(), |acc, x| acc.sub(x));
            v.push(last);
            v
        }
        Family::G => {
            let (a, b) = (LinForm::var(names[0].clone()), LinForm::var(names[1].clone()));
            // a(2αs+αl) + b(αs+αl) with αs=(1,-1,0), αl=(-2,1,1)
            alloc::vec![b.neg(), a.neg(), a.add(&b)]
        }
        _ => names.iter().map(|n| LinForm::var(n.clone())).collect(),
    }
}

/// Builds the root system with the frozen coordinate conventions:
/// A_{n−1}: z₁..z_n with Σzᵢ=0 (z_n eliminated); B/C/D_n: z₁..z_n;
/// G₂: λ = z₁(2α_s+α_l) + z₂(α_s+α_l) inside Σ=0 of ℚ³.
pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem> {
    let bad = || Error::Unsupported(alloc::format!("root system {family}{rank}"));
    let (dim, simple, convention): (usize, Vec<Vector>, &str) = match family {
        Family::A if rank >= 1 => {
            let n = rank + 1;
            let s = (0..rank).map(|i| vsub(&unit(n, i), &unit(n, i + 1))).collect();
            (n, s, "z1..zn with z1+..+zn=0; zn eliminated")
        }
        Family::B | Family::C | Family::D if rank >= 2 => {
            let n = rank;
            let mut s: Vec<Vector> = (0..n - 1).map(|i| vsub(&unit(n, i), &unit(n, i + 1))).collect();
            s.push(match family {
                Family::B => unit(n, n - 1),
                Family::C => vscale(&unit(n, n - 1), &q(2)),
                _ => vadd(&unit(n, n - 2), &unit(n, n - 1)),
            });
            (n, s, "z1..zn orthonormal coordinates")
        }
        Family::G if rank == 2 => {
            let s = alloc::vec![alloc::vec![q(1), q(-1), q(0)], alloc::vec![q(-2), q(1), q(1)]];
            (3, s, "lambda = z1(2a_s+a_l) + z2(a_s+a_l), a_s=(1,-1,0), a_l=(-2,1,1)")
        }
        _ => return Err(bad()),
    };
    // Closure under simple reflections.
    let mut roots: BTreeSet<Vector> = simple.iter().cloned().collect();
    roots.extend(simple.iter().map(|a| vscale(a, &q(-1))));
    loop {
        let mut new = Vec::new();
        for r in &roots {
            for a in &simple {
                let x = reflect(r, a);
                if !roots.contains(&x) {
                    new.push(x);
                }
            }
        }
        if new.is_empty() {
            break;
        }
        roots.extend(new);
    }
    // h with (αᵢ, h) = 1 for every simple αᵢ; (α, h) is then the height.
    let gram: Vec<Vec<Q>> = simple.iter().map(|a| simple.iter().map(|b| dot(a, b)).collect()).collect();
    let c = solve(gram, alloc::vec![Q::one(); rank]).ok_or_else(bad)?;
    let mut h = alloc::vec![Q::zero(); dim];
    for (ci, a) in c.iter().zip(&simple) {
        h = vadd(&h, &vscale(a, ci));
    }
    let mut positive: Vec<(Q, Vector)> =
        roots.into_iter().filter_map(|r| Some((dot(&r, &h), r)).filter(|(ht, _)| ht.is_positive())).collect();
    positive.sort();
    let positive: Vec<Vector> = positive.into_iter().map(|(_, r)| r).collect();
    let mut rho = alloc::vec![Q::zero(); dim];
    for r in &positive {
        rho = vadd(&rho, r);
    }
    let rho = vscale(&rho, &qf(1, 2));
    let mut rs = RootSystem {
        family,
        rank,
        dim,
        simple,
        positive,
        rho,
        vars: zvars(rank),
        lambda: Vec::new(),
        convention: convention.into(),
    };
    rs.lambda = generic_vector(&rs, &rs.vars.clone());
    Ok(rs)
}

impl RootSystem {
    pub fn name(&self) -> String {
        alloc::format!("{}{}", self.family, self.rank)
    }

    /// ⟨v, α∨⟩ for a vector of forms.
    pub fn pairing(&self, v: &[LinForm], alpha: &[Q]) -> LinForm {
        let cv = coroot(alpha);
        let mut r = LinForm::zero();
        for (x, c) in v.iter().zip(&cv) {
            r = r.add(&x.scale(c));
        }
        r
    }

    /// ⟨α, β∨⟩ for simple roots.
    pub fn cartan(&self) -> Vec<Vec<Q>> {
        self.simple.iter().map(|a| self.simple.iter().map(|b| dot(a, &coroot(b))).collect()).collect()
    }

    pub fn is_root(&self, v: &[Q]) -> bool {
        self.positive.iter().any(|r| r.as_slice() == v || vscale(r, &q(-1)) == v)
    }

    pub fn is_negative_root(&self, v: &[Q]) -> bool {
        self.positive.iter().any(|r| vscale(r, &q(-1)) == v)
    }

    /// Standard inner product of a form vector with a rational vector.
    pub fn inner(&self, v: &[LinForm], w: &[Q]) -> LinForm {
        let mut r = LinForm::zero();
        for (x, c) in v.iter().zip(w) {
            r = r.add(&x.scale(c));
        }
        r
    }

    /// Maximal parabolic with the given removed simple root (0-based).
    pub fn parabolic(&self, removed: usize, name: impl Into<String>) -> Result<ParabolicDescriptor> {
        if removed >= self.rank {
            return Err(Error::Unsupported(alloc::format!("no simple root {removed} in {}", self.name())));
        }
        Ok(ParabolicDescriptor { removed, retained: (0..self.rank).filter(|&i| i != removed).collect(), name: name.into() })
    }
}

impl WeylElement {
    pub fn identity(dim: usize) -> Self {
        let mut m = alloc::vec![Q::zero(); dim * dim];
        for i in 0..dim {
            m[i * dim + i] = Q::one();
        }
        WeylElement { word: Vec::new(), matrix: m, dim }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn act(&self, v: &[Q]) -> Vector {
        (0..self.dim).map(|i| (0..self.dim).map(|j| &self.matrix[i * self.dim + j] * &v[j]).sum()).collect()
    }

    pub fn act_forms(&self, v: &[LinForm]) -> Vec<LinForm> {
        (0..self.dim)
            .map(|i| {
                let mut r = LinForm::zero();
                for j in 0..self.dim {
                    let c = &self.matrix[i * self.dim + j];
                    if !c.is_zero() {
                        r = r.add(&v[j].scale(c));
                    }
                }
                r
            })
            .collect()
    }

    pub fn compose(&self, o: &WeylElement) -> WeylElement {
        let d = self.dim;
        let mut m = alloc::vec![Q::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = &self.matrix[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    m[i * d + j] += a * &o.matrix[k * d + j];
                }
            }
        }
        let mut word = self.word.clone();
        word.extend(o.word.iter().copied());
        WeylElement { word, matrix: m, dim: d }
    }

    /// The inverse (transpose, as the action is orthogonal).
    pub fn inverse(&self) -> WeylElement {
        let d = self.dim;
        let mut m = alloc::vec![Q::zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                m[j * d + i] = self.matrix[i * d + j].clone();
            }
        }
        WeylElement { word: self.word.iter().rev().copied().collect(), matrix: m, dim: d }
    }
}

fn simple_reflection(rs: &RootSystem, i: usize) -> WeylElement {
    let d = rs.dim;
    let a = &rs.simple[i];
    let c = coroot(a);
    let mut m = WeylElement::identity(d).matrix;
    for r in 0..d {
        for s in 0..d {
            m[r * d + s] -= &a[r] * &c[s];
        }
    }
    WeylElement { word: alloc::vec![i], matrix: m, dim: d }
}

/// Default bound on |W|.
pub const WEYL_CAP: usize = 50_000;

/// Breadth-first enumeration; each element carries a reduced word.
pub fn weyl_group(rs: &RootSystem, cap: usize) -> Result<Vec<WeylElement>> {
    let gens: Vec<WeylElement> = (0..rs.rank).map(|i| simple_reflection(rs, i)).collect();
    let id = WeylElement::identity(rs.dim);
    let mut seen: BTreeSet<Vec<Q>> = BTreeSet::new();
    seen.insert(id.matrix.clone());
    let mut out = alloc::vec![id.clone()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        for g in &gens {
            let w = g.compose(&out[k]);
            if seen.insert(w.matrix.clone()) {
                if out.len() >= cap {
                    return Err(Error::Unsupported(alloc::format!("Weyl group of {} exceeds cap {cap}", rs.name())));
                }
                out.push(w);
                queue.push_back(out.len() - 1);
            }
        }
    }
    Ok(out)
}

/// Indices (into `rs.positive`) of {α > 0 : wα < 0}.
pub fn inversion_set(rs: &RootSystem, w: &WeylElement) -> Vec<usize> {
    rs.positive.iter().enumerate().filter(|(_, a)| rs.is_negative_root(&w.act(a))).map(|(i, _)| i).collect()
}

//! Test-instance generators addressed by spec strings such as
//! `boolean:3`, `chain:4`, `subspace:q=2,n=3`, `product:lengths=2,3`,
//! `subgroups:d=2,4`, `pentagon`, `diamond:3` and
//! `interval:boolean:3;lo={1};hi={1,2,3}`.
//!
//! Each generator also reports the modularity, `rk₀(⊤/⊥)` and number of
//! quasi-atoms over `⊥` that the construction predicts, computed from
//! closed formulas rather than from the lattice itself.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::field::is_prime;
use crate::lattice::{FiniteLattice, LatticeError};

pub const MAX_SIZE: usize = 512;
pub const MAX_GROUP_ORDER: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("bad generator spec `{0}`")]
    BadSpec(String),
    #[error("instance would have {0} elements, more than {MAX_SIZE}")]
    TooLarge(u128),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Values predicted by the construction; `None` where no formula applies.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Expected {
    pub size: Option<usize>,
    pub modular: Option<bool>,
    pub rk0: Option<u32>,
    pub quasi_atoms: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub lattice: FiniteLattice,
    pub expected: Expected,
}

fn bad(spec: &str) -> GenError {
    GenError::BadSpec(spec.to_string())
}

fn check_size(n: u128) -> Result<(), GenError> {
    if n > MAX_SIZE as u128 {
        Err(GenError::TooLarge(n))
    } else {
        Ok(())
    }
}

fn params(spec: &str, body: &str) -> Result<HashMap<String, String>, GenError> {
    // `k=v,k=v` where values may themselves be comma lists: a bare item
    // continues the previous value
    let mut out: HashMap<String, String> = HashMap::new();
    let mut last: Option<String> = None;
    for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.split_once('=') {
            Some((k, v)) => {
                out.insert(k.trim().to_string(), v.trim().to_string());
                last = Some(k.trim().to_string());
            }
            None => {
                let k = last.clone().ok_or_else(|| bad(spec))?;
                let v = out.get_mut(&k).expect("key present");
                v.push(',');
                v.push_str(item);
            }
        }
    }
    Ok(out)
}

fn parse_num<T: std::str::FromStr>(spec: &str, s: &str) -> Result<T, GenError> {
    s.trim().parse().map_err(|_| bad(spec))
}

fn parse_list(spec: &str, s: &str) -> Result<Vec<u64>, GenError> {
    s.split(',').map(|x| parse_num(spec, x)).collect()
}

/// Builds the instance described by `spec`.
pub fn generate(spec: &str) -> Result<Generated, GenError> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("interval:") {
        let mut parts = rest.split(';');
        let inner = parts.next().ok_or_else(|| bad(spec))?;
        let parent = generate(inner)?;
        let (mut lo, mut hi) = (None, None);
        for part in parts {
            match part.split_once('=') {
                Some(("lo", v)) => lo = Some(v.to_string()),
                Some(("hi", v)) => hi = Some(v.to_string()),
                _ => return Err(bad(spec)),
            }
        }
        let l = &parent.lattice;
        let b = lo.map_or(Ok(l.bot()), |s| l.id(&s))?;
        let a = hi.map_or(Ok(l.top()), |s| l.id(&s))?;
        let (sub, _) = l.interval(b, a)?;
        let expected = Expected {
            size: None,
            modular: (parent.expected.modular == Some(true)).then_some(true),
            rk0: None,
            quasi_atoms: None,
        };
        return Ok(Generated {
            lattice: sub,
            expected,
        });
    }
    let (kind, body) = spec.split_once(':').unwrap_or((spec, ""));
    match kind {
        "boolean" => boolean(parse_num(spec, body)?),
        "chain" => chain(parse_num(spec, body)?),
        "diamond" => diamond(parse_num(spec, body)?),
        "pentagon" if body.is_empty() => pentagon(),
        "subspace" => {
            let p = params(spec, body)?;
            let q = parse_num(spec, p.get("q").ok_or_else(|| bad(spec))?)?;
            let n = parse_num(spec, p.get("n").ok_or_else(|| bad(spec))?)?;
            subspaces(q, n)
        }
        "product" => {
            let p = params(spec, body)?;
            let lengths = parse_list(spec, p.get("lengths").ok_or_else(|| bad(spec))?)?;
            product_of_chains(&lengths.iter().map(|&x| x as usize).collect::<Vec<_>>())
        }
        "subgroups" | "abelian_subgroups" => {
            let p = params(spec, body)?;
            let d = parse_list(spec, p.get("d").ok_or_else(|| bad(spec))?)?;
            subgroup_lattice(&d)
        }
        _ => Err(bad(spec)),
    }
}

fn subset_name(mask: usize, n: usize) -> String {
    let inner: Vec<String> = (0..n)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", inner.join(","))
}

/// Subsets of `{1..n}` named `{}`, `{1}`, `{1,3}`, ...
pub fn boolean(n: u32) -> Result<Generated, GenError> {
    check_size(1u128.checked_shl(n).unwrap_or(u128::MAX))?;
    let size = 1usize << n;
    let names = (0..size).map(|m| subset_name(m, n as usize)).collect();
    let covers: Vec<_> = (0..size)
        .flat_map(|m| {
            (0..n as usize)
                .filter(move |i| m >> i & 1 == 0)
                .map(move |i| (m, m | 1 << i))
        })
        .collect();
    Ok(Generated {
        lattice: FiniteLattice::from_covers(names, &covers)?,
        expected: Expected {
            size: Some(size),
            modular: Some(true),
            rk0: Some(n),
            quasi_atoms: Some(n as usize),
        },
    })
}

/// `0 < 1 < ... < n`.
pub fn chain(n: usize) -> Result<Generated, GenError> {
    check_size(n as u128 + 1)?;
    let names = (0..=n).map(|i| i.to_string()).collect();
    let covers: Vec<_> = (0..n).map(|i| (i, i + 1)).collect();
    Ok(Generated {
        lattice: FiniteLattice::from_covers(names, &covers)?,
        expected: Expected {
            size: Some(n + 1),
            modular: Some(true),
            rk0: Some(n.min(1) as u32),
            quasi_atoms: Some(n),
        },
    })
}

/// `M_k`: a bottom, a top and `k` pairwise incomparable elements between.
pub fn diamond(k: usize) -> Result<Generated, GenError> {
    check_size(k as u128 + 2)?;
    let mut names = vec!["bot".to_string()];
    names.extend((1..=k).map(|i| format!("a{i}")));
    names.push("top".into());
    let top = k + 1;
    let covers: Vec<_> = if k == 0 {
        vec![(0, 1)]
    } else {
        (1..=k).flat_map(|i| [(0, i), (i, top)]).collect()
    };
    let (rk0, q) = match k {
        0 => (1, 1),
        1 => (1, 2),
        _ => (2, k),
    };
    Ok(Generated {
        lattice: FiniteLattice::from_covers(names, &covers)?,
        expected: Expected {
            size: Some(k + 2),
            modular: Some(true),
            rk0: Some(rk0),
            quasi_atoms: Some(q),
        },
    })
}

/// `N_5`: `bot < a < c < top` and `bot < b < top`.
pub fn pentagon() -> Result<Generated, GenError> {
    let names = ["bot", "a", "b", "c", "top"].map(String::from).to_vec();
    Ok(Generated {
        lattice: FiniteLattice::from_covers(names, &[(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)])?,
        expected: Expected {
            size: Some(5),
            modular: Some(false),
            rk0: Some(2),
            quasi_atoms: Some(3),
        },
    })
}

/// Tuples `(x_1, ..., x_k)` with `0 ≤ x_i ≤ lengths[i]`, ordered by coordinates.
pub fn product_of_chains(lengths: &[usize]) -> Result<Generated, GenError> {
    let size = lengths
        .iter()
        .try_fold(1u128, |acc, &l| acc.checked_mul(l as u128 + 1))
        .unwrap_or(u128::MAX);
    check_size(size)?;
    let size = size as usize;
    let decode = |mut idx: usize| -> Vec<usize> {
        lengths
            .iter()
            .map(|&l| {
                let c = idx % (l + 1);
                idx /= l + 1;
                c
            })
            .collect()
    };
    let names = (0..size)
        .map(|i| {
            let parts: Vec<String> = decode(i).iter().map(|c| c.to_string()).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let mut covers = Vec::new();
    for i in 0..size {
        let coords = decode(i);
        let mut stride = 1;
        for (k, &l) in lengths.iter().enumerate() {
            if coords[k] < l {
                covers.push((i, i + stride));
            }
            stride *= l + 1;
        }
    }
    Ok(Generated {
        lattice: FiniteLattice::from_covers(names, &covers)?,
        expected: Expected {
            size: Some(size),
            modular: Some(true),
            rk0: Some(lengths.iter().filter(|&&l| l > 0).count() as u32),
            quasi_atoms: Some(lengths.iter().sum()),
        },
    })
}

/// Number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// All subspaces of `F_q^n` (`q` prime), enumerated by reduced row echelon
/// bases; each is named by its basis rows, e.g. `<100,011>`, and `0`.
pub fn subspaces(q: u64, n: u32) -> Result<Generated, GenError> {
    if !is_prime(q) || n == 0 {
        return Err(GenError::BadSpec(format!("subspace:q={q},n={n}")));
    }
    let total: u128 = (0..=n).map(|k| gaussian_binomial(n, k, q)).sum();
    check_size(total)?;
    let vectors = q.pow(n) as usize;
    let encode = |ds: &[u64]| -> usize { ds.iter().rev().fold(0, |acc, &d| acc * q + d) as usize };
    let mut spaces: Vec<(String, Vec<bool>)> = Vec::new();
    for k in 0..=n as usize {
        // choose pivot columns, then fill the free entries right of each pivot
        for pivots in combinations(n as usize, k) {
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| {
                    let pivots = pivots.clone();
                    (pivots[r] + 1..n as usize)
                        .filter(move |c| !pivots.contains(c))
                        .map(move |c| (r, c))
                })
                .collect();
            let count = (q as usize).pow(free.len() as u32);
            for fill in 0..count {
                let mut rows = vec![vec![0u64; n as usize]; k];
                for (r, &p) in pivots.iter().enumerate() {
                    rows[r][p] = 1;
                }
                let mut f = fill;
                for &(r, c) in &free {
                    rows[r][c] = (f % q as usize) as u64;
                    f /= q as usize;
                }
                let mut member = vec![false; vectors];
                for combo in 0..(q as usize).pow(k as u32) {
                    let mut v = vec![0u64; n as usize];
                    let mut cc = combo;
                    for row in &rows {
                        let coef = (cc % q as usize) as u64;
                        cc /= q as usize;
                        for (x, &y) in v.iter_mut().zip(row) {
                            *x = (*x + coef * y) % q;
                        }
                    }
                    member[encode(&v)] = true;
                }
                let sep = if q < 10 { "" } else { "." };
                let name = if k == 0 {
                    "0".to_string()
                } else {
                    let rs: Vec<String> = rows
                        .iter()
                        .map(|r| {
                            r.iter()
                                .map(|d| d.to_string())
                                .collect::<Vec<_>>()
                                .join(sep)
                        })
                        .collect();
                    format!("<{}>", rs.join(","))
                };
                spaces.push((name, member));
            }
        }
    }
    let leq: Vec<Vec<bool>> = spaces
        .iter()
        .map(|(_, a)| {
            spaces
                .iter()
                .map(|(_, b)| a.iter().zip(b).all(|(x, y)| !x || *y))
                .collect()
        })
        .collect();
    let names = spaces.into_iter().map(|(n, _)| n).collect();
    Ok(Generated {
        lattice: FiniteLattice::from_leq(names, &leq)?,
        expected: Expected {
            size: Some(total as usize),
            modular: Some(true),
            rk0: Some(n),
            quasi_atoms: Some(((q.pow(n) - 1) / (q - 1)) as usize),
        },
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Subgroups of `Z/d_1 × ... × Z/d_k`, found by closing under adjoining
/// one cyclic generator at a time.
pub fn subgroup_lattice(d: &[u64]) -> Result<Generated, GenError> {
    if d.is_empty() || d.iter().any(|&x| x < 1) {
        return Err(GenError::BadSpec(format!("subgroups:d={d:?}")));
    }
    let order = d
        .iter()
        .try_fold(1u64, |acc, &x| acc.checked_mul(x))
        .filter(|&o| o <= MAX_GROUP_ORDER)
        .ok_or(GenError::TooLarge(u128::MAX))?;
    let order = order as usize;
    let decode = |mut i: usize| -> Vec<u64> {
        d.iter()
            .map(|&m| {
                let c = i as u64 % m;
                i /= m as usize;
                c
            })
            .collect()
    };
    let encode = |cs: &[u64]| -> usize {
        cs.iter()
            .zip(d)
            .rev()
            .fold(0u64, |acc, (&c, &m)| acc * m + c) as usize
    };
    let add = |a: usize, b: usize| -> usize {
        let (x, y) = (decode(a), decode(b));
        let s: Vec<u64> = x
            .iter()
            .zip(&y)
            .zip(d)
            .map(|((p, q), m)| (p + q) % m)
            .collect();
        encode(&s)
    };
    let adjoin = |h: &[bool], g: usize| -> Vec<bool> {
        // H + <g>: translate H by multiples of g until they repeat
        let mut out = h.to_vec();
        let mut mult = g;
        while !h[mult] {
            for x in 0..order {
                if h[x] {
                    out[add(x, mult)] = true;
                }
            }
            mult = add(mult, g);
        }
        out
    };
    let elem_name = |g: usize| -> String {
        let cs: Vec<String> = decode(g).iter().map(|c| c.to_string()).collect();
        if d.len() == 1 {
            cs[0].clone()
        } else {
            format!("({})", cs.join(","))
        }
    };
    let mut trivial = vec![false; order];
    trivial[0] = true;
    let mut groups: Vec<(Vec<bool>, Vec<usize>)> = vec![(trivial, Vec::new())];
    let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
    index.insert(groups[0].0.clone(), 0);
    let mut frontier = vec![0usize];
    while let Some(i) = frontier.pop() {
        for g in 1..order {
            if groups[i].0[g] {
                continue;
            }
            let h = adjoin(&groups[i].0, g);
            if !index.contains_key(&h) {
                if groups.len() >= MAX_SIZE {
                    return Err(GenError::TooLarge(groups.len() as u128 + 1));
                }
                let mut gens = groups[i].1.clone();
                gens.push(g);
                index.insert(h.clone(), groups.len());
                frontier.push(groups.len());
                groups.push((h, gens));
            }
        }
    }
    // order by size so that names and ids read bottom-up
    groups.sort_by_key(|(h, gens)| (h.iter().filter(|&&x| x).count(), gens.clone()));
    let names = groups
        .iter()
        .map(|(_, gens)| {
            if gens.is_empty() {
                "0".to_string()
            } else {
                let gs: Vec<String> = gens.iter().map(|&g| elem_name(g)).collect();
                format!("<{}>", gs.join(","))
            }
        })
        .collect();
    let leq: Vec<Vec<bool>> = groups
        .iter()
        .map(|(a, _)| {
            groups
                .iter()
                .map(|(b, _)| a.iter().zip(b).all(|(x, y)| !x || *y))
                .collect()
        })
        .collect();
    // p-rank: how many cyclic factors have order divisible by p
    let mut primes: Vec<u64> = d.iter().flat_map(|&x| prime_factors(x)).collect();
    primes.sort_unstable();
    primes.dedup();
    let rk0: u32 = primes
        .iter()
        .map(|&p| d.iter().filter(|&&x| x % p == 0).count() as u32)
        .sum();
    // cyclic subgroups of prime-power order: elements of order p^k, counted
    // by lcm of coordinate orders, divided by Euler's phi(p^k)
    let elem_order = |g: usize| -> u64 {
        decode(g)
            .iter()
            .zip(d)
            .map(|(&c, &m)| m / gcd(c, m))
            .fold(1, lcm)
    };
    let mut by_order: HashMap<u64, usize> = HashMap::new();
    for g in 1..order {
        *by_order.entry(elem_order(g)).or_default() += 1;
    }
    let quasi_atoms: usize = by_order
        .iter()
        .filter(|(&o, _)| prime_factors(o).len() == 1)
        .map(|(&o, &count)| {
            let p = prime_factors(o)[0];
            count / (o - o / p) as usize
        })
        .sum();
    Ok(Generated {
        lattice: FiniteLattice::from_leq(names, &leq)?,
        expected: Expected {
            size: None,
            modular: Some(true),
            rk0: Some(rk0),
            quasi_atoms: Some(quasi_atoms),
        },
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_three() {
        let g = generate("boolean:3").unwrap();
        assert_eq!(g.lattice.len(), 8);
        assert_eq!(g.lattice.name(g.lattice.top()), "{1,2,3}");
    }

    #[test]
    fn subspace_counts() {
        let g = generate("subspace:q=2,n=3").unwrap();
        assert_eq!(g.lattice.len(), 16);
        assert_eq!(g.expected.quasi_atoms, Some(7));
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
    }

    #[test]
    fn small_subgroup_lattices() {
        let g = generate("subgroups:d=2,2").unwrap();
        assert_eq!(g.lattice.len(), 5);
        assert_eq!(g.expected.rk0, Some(2));
        let c = generate("subgroups:d=4").unwrap();
        assert_eq!(c.lattice.len(), 3);
        assert_eq!(c.expected.quasi_atoms, Some(2));
        let p = generate("subgroups:d=3").unwrap();
        assert_eq!(p.lattice.len(), 2);
    }

    #[test]
    fn interval_spec() {
        let g = generate("interval:boolean:3;lo={1};hi={1,2,3}").unwrap();
        assert_eq!(g.lattice.len(), 4);
        let one = generate("interval:diamond:3;lo=a1;hi=a1").unwrap();
        assert_eq!(one.lattice.len(), 1);
    }

    #[test]
    fn size_cap_is_an_error() {
        assert_eq!(
            generate("boolean:10").unwrap_err(),
            GenError::TooLarge(1024)
        );
        assert!(matches!(
            generate("subspace:q=2,n=6"),
            Err(GenError::TooLarge(_))
        ));
        assert!(matches!(generate("widget:3"), Err(GenError::BadSpec(_))));
    }

    #[test]
    fn product_spec() {
        let g = generate("product:lengths=2,3").unwrap();
        assert_eq!(g.lattice.len(), 12);
        assert_eq!(g.expected.rk0, Some(2));
        assert_eq!(g.expected.quasi_atoms, Some(5));
    }
}

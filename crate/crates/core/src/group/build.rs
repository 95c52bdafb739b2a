use std::collections::HashMap;

use super::{FiniteGroup, MAX_ORDER};
use crate::arith::{is_prime, mod_pow};
use crate::error::{Error, Result};

/// Largest `l` for which `S_l` fits under the order cap.
pub const MAX_SYMMETRIC_DEGREE: usize = 7;

fn power_label(base: &str, e: usize) -> String {
    match e {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{e}"),
    }
}

/// Permutations of `0..l` in lexicographic one-line order.
fn lexicographic_permutations(l: usize) -> Vec<Vec<u8>> {
    let mut current: Vec<u8> = (0..l as u8).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..current.len()).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..current.len()).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

impl FiniteGroup {
    /// `Z_n` with element `i` the residue `i`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("cyclic group order must be positive".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::BudgetExceeded(format!("order {n} exceeds the table cap {MAX_ORDER}")));
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::from_fn(format!("Z_{n}"), labels, |a, b| (a + b) % n)
    }

    /// `D_l` of order `2l`: rotations `r^a` at indices `0..l`, reflections
    /// `r^a f` at `l..2l`, with `f r = r^-1 f`.
    pub fn dihedral(l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidParameter("dihedral parameter must be at least 1".into()));
        }
        if 2 * l > MAX_ORDER {
            return Err(Error::BudgetExceeded(format!(
                "order {} exceeds the table cap {MAX_ORDER}",
                2 * l
            )));
        }
        let mut labels: Vec<String> = (0..l).map(|a| power_label("r", a)).collect();
        labels[0] = "e".into();
        labels.extend((0..l).map(|a| format!("{}f", power_label("r", a))));
        Self::from_fn(format!("D_{l}"), labels, |x, y| {
            let (a, s) = (x % l, x / l);
            let (b, t) = (y % l, y / l);
            // r^a f^s r^b f^t = r^(a + (-1)^s b) f^(s+t)
            let rot = if s == 0 { (a + b) % l } else { (a + l - b) % l };
            rot + l * ((s + t) % 2)
        })
    }

    /// `S_l` on permutations in lexicographic one-line order; the product
    /// `g h` is the composition `x -> g(h(x))`.
    pub fn symmetric(l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidParameter("symmetric degree must be at least 1".into()));
        }
        if l > MAX_SYMMETRIC_DEGREE {
            return Err(Error::BudgetExceeded(format!(
                "S_{l} exceeds the table cap {MAX_ORDER}"
            )));
        }
        let perms = lexicographic_permutations(l);
        let code = |p: &[u8]| p.iter().fold(0usize, |acc, &v| acc * l + v as usize);
        let mut index = vec![0u16; l.pow(l as u32)];
        for (i, p) in perms.iter().enumerate() {
            index[code(p)] = i as u16;
        }
        let labels = perms
            .iter()
            .map(|p| p.iter().map(|&v| char::from(b'1' + v)).collect())
            .collect();
        let mut scratch = vec![0u8; l];
        let mut table = Vec::with_capacity(perms.len() * perms.len());
        for g in &perms {
            for h in &perms {
                for x in 0..l {
                    scratch[x] = g[h[x] as usize];
                }
                table.push(index[code(&scratch)] as usize);
            }
        }
        Self::from_table(format!("S_{l}"), table, labels)
    }

    /// `A_l`: the even permutations of `S_l`, reindexed in lexicographic order.
    pub fn alternating(l: usize) -> Result<Self> {
        let s = Self::symmetric(l)?;
        let perms = lexicographic_permutations(l);
        let even: Vec<usize> = perms
            .iter()
            .enumerate()
            .filter(|(_, p)| {
                let inversions = (0..l)
                    .flat_map(|i| (i + 1..l).map(move |j| (i, j)))
                    .filter(|&(i, j)| p[i] > p[j])
                    .count();
                inversions % 2 == 0
            })
            .map(|(i, _)| i)
            .collect();
        let sub = s.subgroup_from_members(even)?;
        Ok(s.subgroup_as_group(&sub)?.with_name(format!("A_{l}")))
    }

    /// Dicyclic group of order `4m` generated by `a` of order `2m` and `x`
    /// with `x^2 = a^m`, `x a x^-1 = a^-1`. `m = 2` is the quaternion group.
    pub fn dicyclic(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter("dicyclic parameter must be at least 2".into()));
        }
        let half = 2 * m;
        if 2 * half > MAX_ORDER {
            return Err(Error::BudgetExceeded(format!(
                "order {} exceeds the table cap {MAX_ORDER}",
                2 * half
            )));
        }
        let mut labels: Vec<String> = (0..half).map(|k| power_label("a", k)).collect();
        labels[0] = "e".into();
        labels.extend((0..half).map(|k| format!("{}x", power_label("a", k))));
        let name = if m == 2 { "Q_8".to_string() } else { format!("Dic_{m}") };
        Self::from_fn(name, labels, |u, v| {
            let (k, s) = (u % half, u / half);
            let (j, t) = (v % half, v / half);
            let mut rot = if s == 0 { (k + j) % half } else { (k + half - j) % half };
            if s + t == 2 {
                rot = (rot + m) % half;
            }
            rot + half * ((s + t) % 2)
        })
    }

    /// `G1 x G2` with pair `(a, b)` at index `a * |G2| + b`.
    pub fn direct_product(left: &FiniteGroup, right: &FiniteGroup) -> Result<Self> {
        let (n1, n2) = (left.order(), right.order());
        if n1 * n2 > MAX_ORDER {
            return Err(Error::BudgetExceeded(format!(
                "product order {} exceeds the table cap {MAX_ORDER}",
                n1 * n2
            )));
        }
        let labels = (0..n1 * n2)
            .map(|i| format!("({},{})", left.label(i / n2), right.label(i % n2)))
            .collect();
        let name = format!("{} x {}", left.name(), right.name());
        Self::from_fn(name, labels, |x, y| {
            left.mul(x / n2, y / n2) * n2 + right.mul(x % n2, y % n2)
        })
    }

    /// The non-abelian group of order `pq` on `x^q = y^p = 1`, `y x = x^u y`,
    /// where `u` is the smallest integer in `[2, q-1]` with `u^p = 1 mod q`.
    /// Element `x^a y^b` sits at index `a * p + b`.
    pub fn pq(p: u64, q: u64) -> Result<Self> {
        let u = pq_twist(p, q)?;
        let (p, q) = (p as usize, q as usize);
        let upow: Vec<usize> = (0..p).map(|b| mod_pow(u, b as u64, q as u64) as usize).collect();
        let labels = (0..p * q)
            .map(|i| {
                let (a, b) = (i / p, i % p);
                match (a, b) {
                    (0, 0) => "e".to_string(),
                    _ => format!("{}{}", power_label("x", a), power_label("y", b)),
                }
            })
            .collect();
        Self::from_fn(format!("pq_{p}_{q}"), labels, |s, t| {
            let (a1, b1) = (s / p, s % p);
            let (a2, b2) = (t / p, t % p);
            let a = (a1 + a2 * upow[b1]) % q;
            a * p + (b1 + b2) % p
        })
    }

    /// Induced group structure on a subgroup, members renumbered in
    /// ascending order of their parent index.
    pub fn subgroup_as_group(&self, sub: &super::Subgroup) -> Result<Self> {
        let members = sub.members();
        let position: HashMap<usize, usize> =
            members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let labels = members.iter().map(|&m| self.label(m).to_string()).collect();
        let name = format!("subgroup of {} (order {})", self.name(), members.len());
        Self::from_fn(name, labels, |a, b| position[&self.mul(members[a], members[b])])
    }
}

/// Twisting exponent `u` for the group of order `pq`, validating `p` and `q`.
pub fn pq_twist(p: u64, q: u64) -> Result<u64> {
    if !(is_prime(p) && p > 2 && is_prime(q) && q > 2) {
        return Err(Error::InvalidParameter(format!("p={p} and q={q} must be odd primes")));
    }
    if p >= q {
        return Err(Error::InvalidParameter(format!("need p < q, got p={p}, q={q}")));
    }
    if (q - 1) % p != 0 {
        return Err(Error::NoSuchGroup { p, q });
    }
    if (p * q) as usize > MAX_ORDER {
        return Err(Error::BudgetExceeded(format!(
            "order {} exceeds the table cap {MAX_ORDER}",
            p * q
        )));
    }
    Ok((2..q).find(|&u| mod_pow(u, p, q) == 1).expect("q = 1 mod p has a p-th root of unity"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(g: &FiniteGroup) -> Vec<Vec<usize>> {
        (0..g.order()).map(|a| (0..g.order()).map(|b| g.mul(a, b)).collect()).collect()
    }

    #[test]
    fn cyclic_tables() {
        assert_eq!(rows(&FiniteGroup::cyclic(1).unwrap()), vec![vec![0]]);
        assert_eq!(
            rows(&FiniteGroup::cyclic(3).unwrap()),
            vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]
        );
        assert_eq!(FiniteGroup::cyclic(5).unwrap().pow(2, 3), 1);
        assert!(matches!(FiniteGroup::cyclic(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn dihedral_relations() {
        for l in 1..=12 {
            let d = FiniteGroup::dihedral(l).unwrap();
            assert_eq!(d.order(), 2 * l);
            let (r, f) = (1 % l, l);
            assert_eq!(d.pow(r, l as u64), 0);
            assert_eq!(d.mul(f, f), 0);
            assert_eq!(d.mul(f, r), d.mul(d.inv(r), f));
        }
        let d1 = FiniteGroup::dihedral(1).unwrap();
        assert_eq!(rows(&d1), rows(&FiniteGroup::cyclic(2).unwrap()));
    }

    #[test]
    fn symmetric_basics() {
        let s1 = FiniteGroup::symmetric(1).unwrap();
        assert_eq!(s1.order(), 1);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.labels(), ["123", "132", "213", "231", "312", "321"]);
        assert!(!s3.is_abelian());
        assert!(matches!(FiniteGroup::symmetric(8), Err(Error::BudgetExceeded(_))));
        assert!(matches!(FiniteGroup::symmetric(9), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn alternating_four() {
        let a4 = FiniteGroup::alternating(4).unwrap();
        assert_eq!(a4.order(), 12);
        assert_eq!(a4.name(), "A_4");
        // orders: 1 identity, 3 double transpositions, 8 three-cycles
        let mut counts = [0usize; 4];
        for g in 0..12 {
            counts[a4.element_order(g).unwrap()] += 1;
        }
        assert_eq!(counts, [0, 1, 3, 8]);
    }

    #[test]
    fn quaternion_group() {
        let q8 = FiniteGroup::dicyclic(2).unwrap();
        assert_eq!(q8.order(), 8);
        let involutions = (1..8).filter(|&g| q8.element_order(g).unwrap() == 2).count();
        assert_eq!(involutions, 1);
        assert!(!q8.is_abelian());
    }

    #[test]
    fn direct_products() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let z3z3 = FiniteGroup::direct_product(&z3, &z3).unwrap();
        assert_eq!(z3z3.order(), 9);
        assert!((1..9).all(|g| z3z3.element_order(g).unwrap() == 3));

        let z1 = FiniteGroup::cyclic(1).unwrap();
        let d4 = FiniteGroup::dihedral(4).unwrap();
        assert_eq!(rows(&FiniteGroup::direct_product(&z1, &d4).unwrap()), rows(&d4));

        let z2z3 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2).unwrap(), &z3).unwrap();
        // (1,1) sits at index 1*3 + 1
        assert_eq!(z2z3.element_order(4).unwrap(), 6);

        let s5 = FiniteGroup::symmetric(5).unwrap();
        assert!(matches!(
            FiniteGroup::direct_product(&s5, &s5),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn pq_groups() {
        assert_eq!(pq_twist(3, 7).unwrap(), 2);
        assert_eq!(pq_twist(5, 11).unwrap(), 3);
        let g = FiniteGroup::pq(3, 7).unwrap();
        assert_eq!(g.order(), 21);
        assert!(!g.is_abelian());
        // y x = x^u y with x at index p and y at index 1
        let (x, y) = (3, 1);
        assert_eq!(g.mul(y, x), g.mul(g.pow(x, 2), y));
        assert_eq!(FiniteGroup::pq(5, 11).unwrap().order(), 55);
        assert!(matches!(FiniteGroup::pq(3, 5), Err(Error::NoSuchGroup { p: 3, q: 5 })));
        assert!(matches!(FiniteGroup::pq(2, 3), Err(Error::InvalidParameter(_))));
        assert!(matches!(FiniteGroup::pq(3, 9), Err(Error::InvalidParameter(_))));
        assert!(matches!(FiniteGroup::pq(7, 3), Err(Error::InvalidParameter(_))));
    }
}

//! Finite groups as multiplication tables with a canonical element order.
//!
//! Element ids are indices into the canonical ordering; id `0` is always the
//! identity. Groups are immutable once built and carry their conjugacy classes.

use std::collections::{HashMap, HashSet};

use sha2::{Digest, Sha256};

use crate::descriptor::{GroupDescriptor, MAX_PERM_POINTS};
use crate::error::{Error, Result};

/// Upper bound on the order of any group we construct.
pub const MAX_ORDER: usize = 5000;
/// Associativity is checked exhaustively up to this order.
pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 64;

/// Fingerprint of a canonical multiplication table. Objects derived from a
/// group (tables, lengths) carry it so mismatched inputs can be rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupId(u64);

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugacyClasses {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub class_sizes: Vec<usize>,
    pub inverse_class: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// First element (in canonical order) of each class.
    pub fn representative(&self, class: usize) -> usize {
        self.classes[class][0]
    }
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    perms: Option<Vec<Vec<u8>>>,
    classes: ConjugacyClasses,
    hash: [u8; 32],
}

/// Parse a descriptor string and build the group.
pub fn build_group(descriptor: &str) -> Result<FiniteGroup> {
    let d: GroupDescriptor = descriptor.parse()?;
    FiniteGroup::from_descriptor(&d)
}

impl FiniteGroup {
    pub fn from_descriptor(d: &GroupDescriptor) -> Result<Self> {
        let name = d.to_string();
        match d {
            GroupDescriptor::Symmetric(n) => {
                let mut gens = Vec::new();
                if *n >= 2 {
                    gens.push(vec![vec![1, 2]]);
                    gens.push(vec![(1..=*n).collect()]);
                }
                Self::from_cycle_generators(name, &gens, *n)
            }
            GroupDescriptor::Cyclic(n) => {
                let n = *n;
                check_order(n)?;
                Self::from_fn(name, n, |a, b| (a + b) % n, None)
            }
            GroupDescriptor::Dihedral(n) => {
                let n = *n;
                check_order(n.saturating_mul(2))?;
                // id = k + n*e  <->  r^k s^e, with s r = r^-1 s
                Self::from_fn(
                    name,
                    2 * n,
                    |a, b| {
                        let (ka, ea) = (a % n, a / n);
                        let (kb, eb) = (b % n, b / n);
                        let k = if ea == 0 { (ka + kb) % n } else { (ka + n - kb) % n };
                        k + n * ((ea + eb) % 2)
                    },
                    None,
                )
            }
            GroupDescriptor::Quaternion => Self::from_fn(name, 8, quaternion_mul, None),
            GroupDescriptor::Product(a, b) => {
                let ga = Self::from_descriptor(a)?;
                let gb = Self::from_descriptor(b)?;
                let (na, nb) = (ga.order(), gb.order());
                check_order(na.saturating_mul(nb))?;
                Self::from_fn(
                    name,
                    na * nb,
                    |x, y| ga.mul(x / nb, y / nb) * nb + gb.mul(x % nb, y % nb),
                    None,
                )
            }
            GroupDescriptor::Permutations(gens) => {
                let points = gens.iter().flatten().flatten().copied().max().unwrap_or(1);
                Self::from_cycle_generators(name, gens, points)
            }
        }
    }

    /// Build from an explicit table given as rows; row/column 0 must be the identity.
    pub fn from_table(name: impl Into<String>, rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        check_order(n)?;
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGroup("table must be square and nonempty".into()));
        }
        if rows.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        Self::from_fn(name.into(), n, |a, b| rows[a][b], None)
    }

    fn from_fn(
        name: String,
        order: usize,
        f: impl Fn(usize, usize) -> usize,
        perms: Option<Vec<Vec<u8>>>,
    ) -> Result<Self> {
        let mut mul = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                mul.push(f(a, b) as u16);
            }
        }
        let inv = inverse_table(order, &mul)?;
        let mut hasher = Sha256::new();
        hasher.update((order as u64).to_le_bytes());
        for &x in &mul {
            hasher.update(x.to_le_bytes());
        }
        let hash: [u8; 32] = hasher.finalize().into();
        let mut g = FiniteGroup {
            name,
            order,
            mul,
            inv,
            perms,
            classes: ConjugacyClasses {
                classes: vec![],
                class_of: vec![],
                class_sizes: vec![],
                inverse_class: vec![],
            },
            hash,
        };
        g.validate()?;
        g.classes = compute_classes(&g);
        Ok(g)
    }

    fn from_cycle_generators(name: String, gens: &[Vec<Vec<usize>>], points: usize) -> Result<Self> {
        if points > MAX_PERM_POINTS {
            return Err(Error::GeneratorsNotPermutations(format!(
                "point {points} exceeds the limit of {MAX_PERM_POINTS}"
            )));
        }
        let points = points.max(1);
        let gens: Vec<Vec<u8>> = gens
            .iter()
            .map(|cycles| cycles_to_images(cycles, points))
            .collect::<Result<_>>()?;
        let elements = perm_closure(&gens, points)?;
        let index: HashMap<&[u8], usize> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        let order = elements.len();
        let mut rows = vec![vec![0usize; order]; order];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                rows[a][b] = index[compose(pa, pb).as_slice()];
            }
        }
        Self::from_fn(name, order, |a, b| rows[a][b], Some(elements.clone()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn classes(&self) -> &ConjugacyClasses {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    #[inline]
    pub fn class_of(&self, g: usize) -> usize {
        self.classes.class_of[g]
    }

    /// Permutation images (0-based) when the group was built from permutations.
    pub fn permutation(&self, g: usize) -> Option<&[u8]> {
        self.perms.as_ref().map(|p| p[g].as_slice())
    }

    pub fn id(&self) -> GroupId {
        let mut b = [0u8; 8];
        b.copy_from_slice(&self.hash[..8]);
        GroupId(u64::from_le_bytes(b))
    }

    /// Hex SHA-256 of the canonical multiplication table.
    pub fn ordering_hash(&self) -> String {
        self.hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn mul_table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order
    }

    /// Elements commuting with every element, by brute force.
    pub fn center(&self) -> Vec<usize> {
        self.elements()
            .filter(|&z| self.elements().all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    /// Group axioms. Associativity is exhaustive for small orders only.
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(Error::InvalidGroup("element 0 is not a two-sided identity".into()));
            }
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return Err(Error::InvalidGroup(format!("element {a} has no inverse")));
            }
        }
        let mut seen = vec![false; n];
        for a in 0..n {
            for s in seen.iter_mut() {
                *s = false;
            }
            for b in 0..n {
                let c = self.mul(a, b);
                if seen[c] {
                    return Err(Error::InvalidGroup(format!("row {a} is not a permutation")));
                }
                seen[c] = true;
            }
        }
        if n <= ASSOCIATIVITY_CHECK_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(Error::InvalidGroup(format!(
                                "associativity fails on ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The conjugacy classes of `g` (computed once at construction).
pub fn conjugacy_classes(g: &FiniteGroup) -> ConjugacyClasses {
    g.classes.clone()
}

fn check_order(n: usize) -> Result<()> {
    if n > MAX_ORDER {
        Err(Error::ClosureExceedsLimit { limit: MAX_ORDER })
    } else {
        Ok(())
    }
}

fn inverse_table(order: usize, mul: &[u16]) -> Result<Vec<u16>> {
    (0..order)
        .map(|a| {
            (0..order)
                .find(|&b| mul[a * order + b] == 0)
                .map(|b| b as u16)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))
        })
        .collect()
}

/// Units 1, i, j, k are 0..4; id = 2*unit + (negative as usize).
fn quaternion_mul(a: usize, b: usize) -> usize {
    // (sign, unit) of unit_a * unit_b
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let (ua, sa) = (a / 2, a % 2 == 1);
    let (ub, sb) = (b / 2, b % 2 == 1);
    let (s, u) = UNIT[ua][ub];
    2 * u + usize::from(s ^ sa ^ sb)
}

fn compose(a: &[u8], b: &[u8]) -> Vec<u8> {
    // apply b first
    b.iter().map(|&i| a[i as usize]).collect()
}

fn cycles_to_images(cycles: &[Vec<usize>], points: usize) -> Result<Vec<u8>> {
    let mut images: Vec<u8> = (0..points as u8).collect();
    // rightmost cycle acts first
    for cycle in cycles.iter().rev() {
        let mut seen = HashSet::new();
        for &p in cycle {
            if p == 0 || p > points {
                return Err(Error::GeneratorsNotPermutations(format!("point {p} out of range")));
            }
            if !seen.insert(p) {
                return Err(Error::GeneratorsNotPermutations(format!(
                    "point {p} repeated within a cycle"
                )));
            }
        }
        let mut c: Vec<u8> = (0..points as u8).collect();
        for (i, &p) in cycle.iter().enumerate() {
            let next = cycle[(i + 1) % cycle.len()];
            c[p - 1] = (next - 1) as u8;
        }
        images = compose(&c, &images);
    }
    Ok(images)
}

/// Breadth-first closure from the identity under right multiplication by the
/// generators; each BFS level is sorted lexicographically by images.
fn perm_closure(gens: &[Vec<u8>], points: usize) -> Result<Vec<Vec<u8>>> {
    let identity: Vec<u8> = (0..points as u8).collect();
    let mut seen: HashSet<Vec<u8>> = HashSet::from([identity.clone()]);
    let mut elements = vec![identity.clone()];
    let mut frontier = vec![identity];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y = compose(x, g);
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        next.sort();
        if elements.len() + next.len() > MAX_ORDER {
            return Err(Error::ClosureExceedsLimit { limit: MAX_ORDER });
        }
        elements.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(elements)
}

/// Classes ordered: identity class, then ascending size, ties broken by the
/// smallest canonical element id.
fn compute_classes(g: &FiniteGroup) -> ConjugacyClasses {
    let n = g.order();
    let mut assigned = vec![false; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if assigned[x] {
            continue;
        }
        let mut class: Vec<usize> = (0..n)
            .map(|h| g.mul(g.mul(h, x), g.inv(h)))
            .collect();
        class.sort_unstable();
        class.dedup();
        for &y in &class {
            assigned[y] = true;
        }
        classes.push(class);
    }
    classes.sort_by_key(|c| (c[0] != 0, c.len(), c[0]));
    let mut class_of = vec![0; n];
    for (i, c) in classes.iter().enumerate() {
        for &x in c {
            class_of[x] = i;
        }
    }
    let class_sizes = classes.iter().map(Vec::len).collect();
    let inverse_class = classes.iter().map(|c| class_of[g.inv(c[0])]).collect();
    ConjugacyClasses {
        classes,
        class_of,
        class_sizes,
        inverse_class,
    }
}

//! Permutations of `{1..n}`, stabilizer-chain permutation groups, set
//! partitions, stabilizer subgroups of the symmetric group, and the
//! two-partition stabilizer with parity analysis.
//!
//! Points are 1-based in every public interface (cycle notation, partition
//! text, image queries); the internal image table is 0-based. Composition is
//! right-action throughout: `(p * q)` means "apply `p`, then `q`", so
//! `x^(pq) = (x^p)^q`.
//!
//! Group orders are always carried in factored form ([`FactoredNat`]): a
//! stabilizer chain's order is a product of transversal sizes, each at most
//! the degree, so factoring is trivial and exact no matter how large the
//! group is.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::factnum::FactoredNat;

/// Errors from permutation and permutation-group operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    /// Cycle text could not be parsed.
    #[error("malformed cycle notation: {0}")]
    MalformedCycle(String),
    /// A cycle mentions a point outside `1..=degree`.
    #[error("point {point} out of range 1..={degree}")]
    PointOutOfRange {
        /// The offending point.
        point: u64,
        /// The permutation degree.
        degree: u32,
    },
    /// A point appears twice in a cycle expression.
    #[error("point {point} repeated in cycle notation")]
    RepeatedPoint {
        /// The repeated point.
        point: u32,
    },
    /// Two objects that must share a degree do not.
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch {
        /// First degree.
        left: u32,
        /// Second degree.
        right: u32,
    },
    /// An images table is not a bijection.
    #[error("image table is not a bijection: {0}")]
    NotBijection(String),
    /// A set stabilizer was requested for an empty or full subset.
    #[error("subset must be proper and nonempty")]
    DegenerateSubset,
    /// A partition operation required uniform block sizes.
    #[error("partition is not uniform: block sizes {0:?}")]
    NonUniformPartition(Vec<usize>),
    /// Two partitions disagree in block count.
    #[error("block count mismatch: {left} vs {right}")]
    BlockCountMismatch {
        /// First block count.
        left: usize,
        /// Second block count.
        right: usize,
    },
    /// Enumeration was requested for a group larger than the bound.
    #[error("group order {order} exceeds enumeration bound {bound}")]
    OrderExceedsBound {
        /// Decimal order of the group.
        order: String,
        /// The bound.
        bound: u64,
    },
    /// A normalizer descriptor outside the supported closed forms.
    #[error("unsupported stabilizer descriptor: {0}")]
    UnsupportedDescriptor(String),
    /// Invalid partition data.
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

// ---------------------------------------------------------------------------
// Perm
// ---------------------------------------------------------------------------

/// A permutation of `{1..n}`, stored as a 0-based image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    /// The identity permutation of the given degree.
    pub fn identity(degree: u32) -> Perm {
        Perm { images: (0..degree).collect() }
    }

    /// Builds from a 1-based image table (`table[i-1]` is the image of `i`).
    pub fn from_images_one_based(table: &[u32]) -> Result<Perm, PermError> {
        let n = table.len() as u32;
        let mut seen = vec![false; table.len()];
        for &im in table {
            if im < 1 || im > n {
                return Err(PermError::NotBijection(format!("image {im} out of range")));
            }
            if seen[(im - 1) as usize] {
                return Err(PermError::NotBijection(format!("image {im} repeated")));
            }
            seen[(im - 1) as usize] = true;
        }
        Ok(Perm { images: table.iter().map(|&im| im - 1).collect() })
    }

    /// Parses disjoint-cycle notation like `"(1,2)(3,4,5)"`.
    ///
    /// Whitespace is ignored, `"()"` denotes the identity, fixed points may
    /// be written as 1-cycles. Every point must lie in `1..=degree` and may
    /// appear at most once.
    pub fn parse(text: &str, degree: u32) -> Result<Perm, PermError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut images: Vec<u32> = (0..degree).collect();
        let mut used = vec![false; degree as usize];
        let bytes = compact.as_bytes();
        let mut pos = 0usize;
        if compact.is_empty() {
            return Err(PermError::MalformedCycle("empty input".into()));
        }
        while pos < bytes.len() {
            if bytes[pos] != b'(' {
                return Err(PermError::MalformedCycle(format!(
                    "expected '(' at offset {pos}"
                )));
            }
            let close = compact[pos..]
                .find(')')
                .map(|o| pos + o)
                .ok_or_else(|| PermError::MalformedCycle("unbalanced '('".into()))?;
            let inner = &compact[pos + 1..close];
            pos = close + 1;
            if inner.is_empty() {
                continue; // "()" is the identity cycle
            }
            let mut cycle: Vec<u32> = Vec::new();
            for token in inner.split(',') {
                let point: u64 = token.parse().map_err(|_| {
                    PermError::MalformedCycle(format!("bad point token {token:?}"))
                })?;
                if point < 1 || point > degree as u64 {
                    return Err(PermError::PointOutOfRange { point, degree });
                }
                let point = point as u32;
                if used[(point - 1) as usize] {
                    return Err(PermError::RepeatedPoint { point });
                }
                used[(point - 1) as usize] = true;
                cycle.push(point - 1);
            }
            for w in 0..cycle.len() {
                images[cycle[w] as usize] = cycle[(w + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    /// Degree `n`.
    pub fn degree(&self) -> u32 {
        self.images.len() as u32
    }

    /// Image of a 1-based point.
    pub fn image_of(&self, point: u32) -> u32 {
        self.images[(point - 1) as usize] + 1
    }

    /// Image of a 0-based point (internal fast path).
    #[inline]
    pub(crate) fn image0(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    /// True iff every point is fixed.
    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i as u32 == im)
    }

    /// Composition `self * other`: apply `self`, then `other`.
    pub fn mul(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&im| other.images[im as usize]).collect(),
        }
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            inv[im as usize] = i as u32;
        }
        Perm { images: inv }
    }

    /// Conjugate `a^{-1} * self * a`.
    pub fn conjugated_by(&self, a: &Perm) -> Perm {
        a.inverse().mul(self).mul(a)
    }

    /// Sign: `(-1)^(degree - number of cycles)`.
    pub fn sign(&self) -> i32 {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut cycles = 0usize;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
            }
        }
        if (n - cycles) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The nontrivial cycles, 1-based, each starting at its least point,
    /// sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u32 + 1);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// The least moved point (1-based), if any.
    pub fn first_moved(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &im)| i as u32 != im)
            .map(|(i, _)| i as u32 + 1)
    }

    /// Applies the permutation to a set of 1-based points, returning the
    /// sorted image set.
    pub fn apply_to_set(&self, set: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = set.iter().map(|&p| self.image_of(p)).collect();
        out.sort_unstable();
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

// ---------------------------------------------------------------------------
// Stabilizer chain
// ---------------------------------------------------------------------------

/// One level of a stabilizer chain: a base point, the generators of the
/// group at this level (they fix all earlier base points), the base orbit in
/// deterministic BFS order, and a transversal mapping each orbit point to a
/// representative sending the base there.
#[derive(Debug, Clone)]
struct ChainLevel {
    /// 0-based base point.
    base: u32,
    gens: Vec<Perm>,
    orbit: Vec<u32>,
    transversal: HashMap<u32, Perm>,
}

impl ChainLevel {
    fn new(degree: u32, base: u32) -> ChainLevel {
        let mut transversal = HashMap::new();
        transversal.insert(base, Perm::identity(degree));
        ChainLevel { base, gens: Vec::new(), orbit: vec![base], transversal }
    }

    /// Recomputes the orbit and transversal by BFS (deterministic: FIFO
    /// queue, generators in list order, first visit wins).
    fn recompute_orbit(&mut self, degree: u32) {
        self.orbit.clear();
        self.transversal.clear();
        self.orbit.push(self.base);
        self.transversal.insert(self.base, Perm::identity(degree));
        let mut head = 0usize;
        while head < self.orbit.len() {
            let point = self.orbit[head];
            head += 1;
            let rep = self.transversal[&point].clone();
            for g in &self.gens {
                let image = g.image0(point);
                if !self.transversal.contains_key(&image) {
                    self.transversal.insert(image, rep.mul(g));
                    self.orbit.push(image);
                }
            }
        }
    }
}

/// A stabilizer chain with deterministic base and transversals.
#[derive(Debug, Clone)]
pub struct StabChain {
    degree: u32,
    levels: Vec<ChainLevel>,
}

/// Result of sifting an element through (a suffix of) the chain.
struct Sift {
    /// What remains after stripping.
    residue: Perm,
    /// The level at which stripping stopped (`levels.len()` if it ran off
    /// the end).
    stuck: usize,
}

impl StabChain {
    /// Builds a verified chain from generators by the Schreier–Sims
    /// procedure (deterministic base: each level's base is the least point
    /// moved by the residue that created it).
    fn build(degree: u32, gens: &[Perm]) -> StabChain {
        let mut chain = StabChain { degree, levels: Vec::new() };
        for g in gens {
            if !g.is_identity() {
                chain.insert_generator(g.clone());
            }
        }
        // Verify levels bottom-up; every failure inserts the offending
        // residue and resumes at its level.
        let mut level = chain.levels.len();
        while level > 0 {
            level -= 1;
            if let Some(sift) = chain.find_violation(level) {
                let stuck = sift.stuck;
                chain.insert_residue(level, sift);
                // Re-verify from the insertion point downward first.
                level = (stuck + 1).min(chain.levels.len());
            }
        }
        chain
    }

    /// Adds an input generator: it joins every level whose base it fixes,
    /// plus the first level whose base it moves (appending a level if it
    /// fixes all existing bases).
    fn insert_generator(&mut self, g: Perm) {
        let mut level = 0usize;
        loop {
            if level == self.levels.len() {
                let base = g.first_moved().expect("non-identity") - 1;
                self.levels.push(ChainLevel::new(self.degree, base));
            }
            let moves_base = {
                let l = &self.levels[level];
                g.image0(l.base) != l.base
            };
            self.levels[level].gens.push(g.clone());
            self.levels[level].recompute_orbit(self.degree);
            if moves_base {
                break;
            }
            level += 1;
        }
    }

    /// Inserts a sift residue originating from level `origin`'s Schreier
    /// generators.
    ///
    /// The residue joins every level from `origin + 1` down to the stuck
    /// level so the level groups stay nested (each level's generators lie in
    /// the level above) — without the nesting, sift-based verification is
    /// unsound.
    fn insert_residue(&mut self, origin: usize, sift: Sift) {
        debug_assert!(!sift.residue.is_identity());
        if sift.stuck == self.levels.len() {
            let base = sift.residue.first_moved().expect("non-identity") - 1;
            self.levels.push(ChainLevel::new(self.degree, base));
        }
        for l in (origin + 1)..=sift.stuck {
            self.levels[l].gens.push(sift.residue.clone());
            self.levels[l].recompute_orbit(self.degree);
        }
    }

    /// Scans level `i`'s Schreier generators for one that fails to sift to
    /// the identity through the deeper levels.
    fn find_violation(&self, i: usize) -> Option<Sift> {
        let level = &self.levels[i];
        for &point in &level.orbit {
            let rep = &level.transversal[&point];
            for g in &level.gens {
                let image = g.image0(point);
                let rep_image = &level.transversal[&image];
                // Schreier generator: rep * g * rep_image^{-1} fixes the
                // base, hence belongs to the next level's group.
                let schreier = rep.mul(g).mul(&rep_image.inverse());
                let sift = self.sift_from(i + 1, schreier);
                if !sift.residue.is_identity() {
                    return Some(sift);
                }
            }
        }
        None
    }

    /// Strips `p` through levels `from..`, returning the residue and stuck
    /// level.
    fn sift_from(&self, from: usize, p: Perm) -> Sift {
        let mut current = p;
        for (j, level) in self.levels.iter().enumerate().skip(from) {
            let image = current.image0(level.base);
            match level.transversal.get(&image) {
                Some(rep) => current = current.mul(&rep.inverse()),
                None => return Sift { residue: current, stuck: j },
            }
        }
        Sift { residue: current, stuck: self.levels.len() }
    }

    /// Membership test by sifting from the top.
    fn contains(&self, p: &Perm) -> bool {
        self.sift_from(0, p.clone()).residue.is_identity()
    }

    /// Product of transversal sizes, factored (each factor is at most the
    /// degree).
    fn order(&self) -> FactoredNat {
        let mut order = FactoredNat::one();
        for level in &self.levels {
            let size = FactoredNat::from_u64(level.orbit.len() as u64)
                .expect("orbit size is a small positive integer");
            order = order.mul(&size);
        }
        order
    }
}

// ---------------------------------------------------------------------------
// PermGroup
// ---------------------------------------------------------------------------

/// A finitely generated permutation group with a verified stabilizer chain.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: u32,
    gens: Vec<Perm>,
    chain: StabChain,
    order: FactoredNat,
}

impl PermGroup {
    /// Builds the group generated by `gens` on `1..=degree`.
    pub fn from_generators(degree: u32, gens: Vec<Perm>) -> Result<PermGroup, PermError> {
        for g in &gens {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch { left: degree, right: g.degree() });
            }
        }
        let chain = StabChain::build(degree, &gens);
        let order = chain.order();
        Ok(PermGroup { degree, gens, chain, order })
    }

    /// The trivial group.
    pub fn trivial(degree: u32) -> PermGroup {
        PermGroup::from_generators(degree, Vec::new()).expect("trivial group")
    }

    /// The full symmetric group on `1..=n`.
    pub fn symmetric(n: u32) -> PermGroup {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(transposition(n, 1, 2));
        }
        if n >= 3 {
            gens.push(cycle_perm(n, &(1..=n).collect::<Vec<_>>()));
        }
        PermGroup::from_generators(n, gens).expect("symmetric group generators")
    }

    /// The alternating group on `1..=n`.
    pub fn alternating(n: u32) -> PermGroup {
        let mut gens = Vec::new();
        if n >= 3 {
            gens.push(cycle_perm(n, &[1, 2, 3]));
        }
        if n >= 4 {
            let long: Vec<u32> = if n % 2 == 1 { (1..=n).collect() } else { (2..=n).collect() };
            gens.push(cycle_perm(n, &long));
        }
        PermGroup::from_generators(n, gens).expect("alternating group generators")
    }

    /// Degree of the action.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The generating set this group was built from.
    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    /// Exact factored order.
    pub fn order(&self) -> &FactoredNat {
        &self.order
    }

    /// Base points of the stabilizer chain (1-based).
    pub fn base(&self) -> Vec<u32> {
        self.chain.levels.iter().map(|l| l.base + 1).collect()
    }

    /// Membership test.
    pub fn contains(&self, p: &Perm) -> Result<bool, PermError> {
        if p.degree() != self.degree {
            return Err(PermError::DegreeMismatch { left: self.degree, right: p.degree() });
        }
        Ok(self.chain.contains(p))
    }

    /// True iff every generator of `other` lies in `self`.
    pub fn contains_group(&self, other: &PermGroup) -> Result<bool, PermError> {
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True iff the two groups are equal as subgroups of the symmetric
    /// group.
    pub fn same_group(&self, other: &PermGroup) -> Result<bool, PermError> {
        Ok(self.order == other.order && self.contains_group(other)?)
    }

    /// True iff no generator is odd (equivalently the whole group consists
    /// of even permutations).
    pub fn is_even_subgroup(&self) -> bool {
        self.gens.iter().all(|g| g.sign() == 1)
    }

    /// Every element exactly once (transversal products, deterministic
    /// order). Errors if the order exceeds `bound`.
    pub fn enumerate_small(&self, bound: u64) -> Result<Vec<Perm>, PermError> {
        if !self.order.le_u64(bound) {
            return Err(PermError::OrderExceedsBound {
                order: self.order.to_decimal_string(),
                bound,
            });
        }
        let mut elements = vec![Perm::identity(self.degree)];
        // Build products from the deepest level outward so deeper factors
        // come first in the composition h * u.
        for level in self.chain.levels.iter().rev() {
            let mut next = Vec::with_capacity(elements.len() * level.orbit.len());
            for &point in &level.orbit {
                let rep = &level.transversal[&point];
                for h in &elements {
                    next.push(h.mul(rep));
                }
            }
            elements = next;
        }
        debug_assert_eq!(Some(elements.len() as u64), self.order.to_u64());
        Ok(elements)
    }

    /// The canonical representative of the right coset `self * x`: the
    /// unique coset member whose tuple of base-point images (in chain base
    /// order) is lexicographically least, found greedily level by level.
    ///
    /// Two elements yield the same representative iff they lie in the same
    /// coset, and the result never depends on transversal choices: the
    /// members attaining the minimal image prefix after the last level form
    /// a coset of the pointwise base stabilizer, which is trivial.
    pub fn coset_canonical_rep(&self, x: &Perm) -> Perm {
        let mut current = x.clone();
        for level in &self.chain.levels {
            // Pick the orbit point whose image under the running element is
            // least; its transversal representative extends the canonical
            // prefix.
            let mut best_point = level.base;
            let mut best_image = u32::MAX;
            for &point in &level.orbit {
                let image = current.image0(point);
                if image < best_image {
                    best_image = image;
                    best_point = point;
                }
            }
            current = level.transversal[&best_point].mul(&current);
        }
        current
    }

    /// Canonical hashable key for the right coset `self * x` (the image
    /// table of [`PermGroup::coset_canonical_rep`]).
    pub fn coset_key(&self, x: &Perm) -> Vec<u32> {
        self.coset_canonical_rep(x).images
    }
}

/// The transposition `(a, b)` at the given degree (1-based points).
pub fn transposition(degree: u32, a: u32, b: u32) -> Perm {
    cycle_perm(degree, &[a, b])
}

/// The single cycle `(points[0], points[1], ...)` at the given degree.
pub fn cycle_perm(degree: u32, points: &[u32]) -> Perm {
    let mut images: Vec<u32> = (0..degree).collect();
    for w in 0..points.len() {
        images[(points[w] - 1) as usize] = points[(w + 1) % points.len()] - 1;
    }
    Perm { images }
}

/// A permutation acting as several disjoint cycles (1-based points).
pub fn product_of_cycles(degree: u32, cycles: &[Vec<u32>]) -> Perm {
    let mut images: Vec<u32> = (0..degree).collect();
    for cycle in cycles {
        for w in 0..cycle.len() {
            images[(cycle[w] - 1) as usize] = cycle[(w + 1) % cycle.len()] - 1;
        }
    }
    Perm { images }
}

/// The intersection `H ∩ A_n` together with a flag telling whether the
/// index was 2 (true) or `H` was already even (false).
///
/// Uses the standard two-coset Schreier generators: with `t` the first odd
/// generator, the even subgroup is generated by the even generators `s`,
/// their conjugates `t s t^{-1}`, and the products `s t^{-1}`, `t s` for odd
/// generators `s`.
pub fn intersect_alternating(h: &PermGroup) -> (PermGroup, bool) {
    let odd = h.gens.iter().find(|g| g.sign() == -1).cloned();
    let Some(t) = odd else {
        return (h.clone(), false);
    };
    let t_inv = t.inverse();
    let mut gens = Vec::new();
    for s in &h.gens {
        if s.sign() == 1 {
            gens.push(s.clone());
            gens.push(t.mul(s).mul(&t_inv));
        } else {
            gens.push(s.mul(&t_inv));
            gens.push(t.mul(s));
        }
    }
    gens.retain(|g| !g.is_identity());
    gens.sort();
    gens.dedup();
    let group = PermGroup::from_generators(h.degree, gens).expect("degrees match");
    debug_assert!(group.is_even_subgroup());
    (group, true)
}

// ---------------------------------------------------------------------------
// SetPartition
// ---------------------------------------------------------------------------

/// An ordered partition of `{1..n}` into indexed blocks `V_1, ..., V_k`.
///
/// Block order is meaningful (intersection matrices index cells by block
/// position); use [`SetPartition::canonical`] when only the underlying
/// unordered partition matters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    degree: u32,
    blocks: Vec<Vec<u32>>,
}

impl SetPartition {
    /// Builds from explicit blocks (validated: disjoint, nonempty, covering
    /// `{1..degree}`); each block is sorted, block order is preserved.
    pub fn new(degree: u32, blocks: Vec<Vec<u32>>) -> Result<SetPartition, PermError> {
        let mut seen = vec![false; degree as usize];
        let mut total = 0usize;
        let mut sorted_blocks = Vec::with_capacity(blocks.len());
        for block in blocks {
            if block.is_empty() {
                return Err(PermError::InvalidPartition("empty block".into()));
            }
            let mut b = block;
            b.sort_unstable();
            for &p in &b {
                if p < 1 || p > degree {
                    return Err(PermError::InvalidPartition(format!(
                        "point {p} out of range 1..={degree}"
                    )));
                }
                if seen[(p - 1) as usize] {
                    return Err(PermError::InvalidPartition(format!("point {p} repeated")));
                }
                seen[(p - 1) as usize] = true;
            }
            total += b.len();
            sorted_blocks.push(b);
        }
        if total != degree as usize {
            return Err(PermError::InvalidPartition(format!(
                "blocks cover {total} of {degree} points"
            )));
        }
        Ok(SetPartition { degree, blocks: sorted_blocks })
    }

    /// The uniform partition of `{1..mk}` into `k` consecutive blocks of
    /// size `m`: `V_i = {(i-1)m + 1, ..., im}`.
    pub fn uniform(m: u32, k: u32) -> SetPartition {
        let blocks = (0..k)
            .map(|i| (i * m + 1..=(i + 1) * m).collect())
            .collect();
        SetPartition { degree: m * k, blocks }
    }

    /// Parses text like `"{1,2,3}{4,5,6}"`.
    pub fn parse(text: &str, degree: u32) -> Result<SetPartition, PermError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut blocks = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            if !rest.starts_with('{') {
                return Err(PermError::InvalidPartition("expected '{'".into()));
            }
            let close = rest
                .find('}')
                .ok_or_else(|| PermError::InvalidPartition("unbalanced '{'".into()))?;
            let inner = &rest[1..close];
            rest = &rest[close + 1..];
            let mut block = Vec::new();
            for token in inner.split(',') {
                let p: u32 = token.parse().map_err(|_| {
                    PermError::InvalidPartition(format!("bad point token {token:?}"))
                })?;
                block.push(p);
            }
            blocks.push(block);
        }
        SetPartition::new(degree, blocks)
    }

    /// Degree `n`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of blocks `k`.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// The blocks, each sorted ascending, in index order.
    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// `Some(m)` if every block has the same size `m`.
    pub fn uniform_block_size(&self) -> Option<u32> {
        let m = self.blocks.first()?.len();
        if self.blocks.iter().all(|b| b.len() == m) {
            Some(m as u32)
        } else {
            None
        }
    }

    /// The image partition `v^g` with `W_i = V_i^g`: block order follows the
    /// input (the indexing is semantically significant downstream).
    pub fn apply(&self, g: &Perm) -> SetPartition {
        debug_assert_eq!(g.degree(), self.degree);
        SetPartition {
            degree: self.degree,
            blocks: self.blocks.iter().map(|b| g.apply_to_set(b)).collect(),
        }
    }

    /// The same partition with blocks reordered by least element — the
    /// canonical representative of the underlying unordered partition.
    pub fn canonical(&self) -> SetPartition {
        let mut blocks = self.blocks.clone();
        blocks.sort_by_key(|b| b[0]);
        SetPartition { degree: self.degree, blocks }
    }

    /// Index of the block containing a 1-based point.
    pub fn block_of(&self, point: u32) -> usize {
        self.blocks
            .iter()
            .position(|b| b.binary_search(&point).is_ok())
            .expect("point within degree")
    }

    /// True iff `g` maps every block onto some block (the unordered
    /// partition is preserved).
    pub fn is_stabilized_by(&self, g: &Perm) -> bool {
        self.apply(g).canonical() == self.canonical()
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in &self.blocks {
            write!(f, "{{")?;
            for (i, p) in block.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

impl Serialize for SetPartition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

// ---------------------------------------------------------------------------
// Stabilizer constructors
// ---------------------------------------------------------------------------

/// Generators of the symmetric group on an explicit point set, at ambient
/// degree `n` (empty for sets of size < 2).
fn symmetric_on(degree: u32, points: &[u32]) -> Vec<Perm> {
    let mut gens = Vec::new();
    if points.len() >= 2 {
        gens.push(transposition(degree, points[0], points[1]));
    }
    if points.len() >= 3 {
        gens.push(cycle_perm(degree, points));
    }
    gens
}

/// The stabilizer of `subset` in the symmetric group of degree `n`
/// (isomorphic to `S_m × S_{n-m}`), intersected with the alternating group
/// when `even_only` is set.
pub fn set_stabilizer_group(
    n: u32,
    subset: &[u32],
    even_only: bool,
) -> Result<PermGroup, PermError> {
    let mut inside: Vec<u32> = subset.to_vec();
    inside.sort_unstable();
    inside.dedup();
    if inside.is_empty() || inside.len() >= n as usize {
        return Err(PermError::DegenerateSubset);
    }
    if inside[0] < 1 || *inside.last().unwrap() > n {
        return Err(PermError::InvalidPartition("subset point out of range".into()));
    }
    let outside: Vec<u32> = (1..=n).filter(|p| inside.binary_search(p).is_err()).collect();
    let mut gens = symmetric_on(n, &inside);
    gens.extend(symmetric_on(n, &outside));
    let full = PermGroup::from_generators(n, gens)?;
    Ok(if even_only { intersect_alternating(&full).0 } else { full })
}

/// The blockwise stabilizer of a uniform partition in the symmetric group
/// (the wreath product of symmetric groups in its imprimitive action),
/// intersected with the alternating group when `even_only` is set.
pub fn partition_stabilizer_group(
    v: &SetPartition,
    even_only: bool,
) -> Result<PermGroup, PermError> {
    let Some(m) = v.uniform_block_size() else {
        return Err(PermError::NonUniformPartition(
            v.blocks().iter().map(|b| b.len()).collect(),
        ));
    };
    let n = v.degree();
    let k = v.block_count();
    let mut gens = Vec::new();
    // Symmetric group inside the first block (conjugates arise via the
    // block-transitive generators below).
    gens.extend(symmetric_on(n, &v.blocks()[0]));
    if m >= 2 && k >= 2 {
        // The block gens only normalize the later blocks if block
        // permutations are present; add in-block gens for every block so
        // degenerate cases (k >= 2, no transitivity assumptions) still
        // produce the full wreath product.
        for block in &v.blocks()[1..] {
            gens.extend(symmetric_on(n, block));
        }
    }
    if k >= 2 {
        // Swap blocks 1 and 2 pointwise in sorted order.
        let cycles: Vec<Vec<u32>> = (0..m as usize)
            .map(|j| vec![v.blocks()[0][j], v.blocks()[1][j]])
            .collect();
        gens.push(product_of_cycles(n, &cycles));
    }
    if k >= 3 {
        // Cycle all blocks.
        let cycles: Vec<Vec<u32>> = (0..m as usize)
            .map(|j| (0..k).map(|i| v.blocks()[i][j]).collect())
            .collect();
        gens.push(product_of_cycles(n, &cycles));
    }
    gens.retain(|g| !g.is_identity());
    let full = PermGroup::from_generators(n, gens)?;
    Ok(if even_only { intersect_alternating(&full).0 } else { full })
}

/// Descriptor of a stabilizer subgroup whose normalizer has a classical
/// closed form.
#[derive(Debug, Clone)]
pub enum StabDescriptor {
    /// The stabilizer of a subset of `{1..n}`.
    SetStab {
        /// Ambient degree.
        degree: u32,
        /// The stabilized subset.
        subset: Vec<u32>,
    },
    /// The blockwise stabilizer of a uniform partition.
    PartitionStab {
        /// The stabilized partition.
        partition: SetPartition,
    },
}

/// The normalizer `N_{S_n}(H)` of a descriptor-defined stabilizer, plus a
/// coset representative `ι ∈ N \ H` when `N > H`.
#[derive(Debug, Clone)]
pub struct NormalizerReport {
    /// The normalizer as an explicit group.
    pub group: PermGroup,
    /// An element of `N \ H`, when the normalizer strictly contains `H`.
    pub iota: Option<Perm>,
}

/// Computes `N_{S_n}(H)` from the structural descriptor of `H` (closed
/// forms: the full stabilizer itself, or the wreath product on a balanced
/// bisection).
///
/// With `even_only` set, `H` is the even part of the descriptor's stabilizer
/// and the report carries a representative `ι ∈ N \ H` whenever `N > H`
/// (for partition stabilizers with blocks of size at least 2 this is the
/// least in-block transposition).
pub fn normalizer_in_sym(
    desc: &StabDescriptor,
    even_only: bool,
) -> Result<NormalizerReport, PermError> {
    match desc {
        StabDescriptor::SetStab { degree, subset } => {
            let n = *degree;
            let mut inside = subset.clone();
            inside.sort_unstable();
            inside.dedup();
            if inside.is_empty() || inside.len() >= n as usize {
                return Err(PermError::DegenerateSubset);
            }
            let outside: Vec<u32> =
                (1..=n).filter(|p| inside.binary_search(p).is_err()).collect();
            let m = inside.len();
            let k = outside.len();
            if m != k {
                // The stabilizer is self-normalizing.
                let group = set_stabilizer_group(n, &inside, false)?;
                let iota = if even_only {
                    least_odd_in_blocks(n, &[inside.clone(), outside])
                } else {
                    None
                };
                Ok(NormalizerReport { group, iota })
            } else {
                // Balanced bisection: the normalizer swaps the halves.
                let v = SetPartition::new(n, vec![inside.clone(), outside.clone()])?;
                let group = partition_stabilizer_group(&v, false)?;
                let iota = if even_only {
                    // An odd element of the set stabilizer if one exists,
                    // else the (then odd is irrelevant) half swap.
                    least_odd_in_blocks(n, &[inside.clone(), outside.clone()]).or_else(|| {
                        let cycles: Vec<Vec<u32>> =
                            (0..m).map(|j| vec![inside[j], outside[j]]).collect();
                        Some(product_of_cycles(n, &cycles))
                    })
                } else {
                    let cycles: Vec<Vec<u32>> =
                        (0..m).map(|j| vec![inside[j], outside[j]]).collect();
                    Some(product_of_cycles(n, &cycles))
                };
                Ok(NormalizerReport { group, iota })
            }
        }
        StabDescriptor::PartitionStab { partition } => {
            if partition.uniform_block_size().is_none() {
                return Err(PermError::UnsupportedDescriptor(
                    "normalizer closed form requires a uniform partition".into(),
                ));
            }
            let group = partition_stabilizer_group(partition, false)?;
            let iota = if even_only {
                least_odd_in_partition(partition)
            } else {
                None
            };
            Ok(NormalizerReport { group, iota })
        }
    }
}

/// The least odd element available inside a block structure: an in-block
/// transposition from the first block of size >= 2.
fn least_odd_in_blocks(degree: u32, blocks: &[Vec<u32>]) -> Option<Perm> {
    blocks
        .iter()
        .find(|b| b.len() >= 2)
        .map(|b| transposition(degree, b[0], b[1]))
}

/// The least odd element of a partition stabilizer: an in-block
/// transposition when block size >= 2, else a two-point block swap (odd for
/// singleton blocks).
fn least_odd_in_partition(v: &SetPartition) -> Option<Perm> {
    let m = v.uniform_block_size()? as usize;
    if m >= 2 {
        return least_odd_in_blocks(v.degree(), v.blocks());
    }
    if v.block_count() >= 2 {
        // Blocks are singletons: swapping two blocks is a transposition.
        return Some(transposition(v.degree(), v.blocks()[0][0], v.blocks()[1][0]));
    }
    None
}

/// Brute-force normalizer of `h` inside `ambient` (test support only):
/// enumerates the ambient group, so its order must be at most `bound`.
pub fn normalizer_brute_force(
    ambient: &PermGroup,
    h: &PermGroup,
    bound: u64,
) -> Result<PermGroup, PermError> {
    let elements = ambient.enumerate_small(bound)?;
    let mut gens = Vec::new();
    for x in &elements {
        let x_inv = x.inverse();
        let normalizes = h
            .generators()
            .iter()
            .all(|g| h.contains(&x_inv.mul(g).mul(x)).unwrap_or(false));
        if normalizes {
            gens.push(x.clone());
        }
    }
    PermGroup::from_generators(ambient.degree(), gens)
}

// ---------------------------------------------------------------------------
// Pair stabilizer
// ---------------------------------------------------------------------------

/// The stabilizer of an ordered pair of partitions, with the parity data
/// needed by the semisymmetry certificates.
#[derive(Debug, Clone)]
pub struct PairStabilizerReport {
    /// Generators of the full pair stabilizer.
    pub generators: Vec<Perm>,
    /// Exact order: the product of `|C_ij|!` over all cells times the number
    /// of cell-size-preserving block-permutation pairs.
    pub order: FactoredNat,
    /// True iff the pair stabilizer contains an odd permutation
    /// (equivalently, some generator is odd).
    pub contains_odd_element: bool,
    /// The cell-size matrix `|V_i ∩ W_j|`.
    pub cell_sizes: Vec<Vec<u64>>,
}

/// Computes the subgroup of `S_n` stabilizing both partitions blockwise-
/// setwise: all permutations mapping blocks of `v` onto blocks of `v` and
/// blocks of `w` onto blocks of `w`.
///
/// Structure: the kernel fixing every block is the direct product of
/// symmetric groups on the cells `C_ij = V_i ∩ W_j`; the block-level action
/// is the group of pairs `(σ, τ)` preserving the cell-size matrix, lifted by
/// order-preserving cell bijections. The order is exact; generators cover
/// both layers.
pub fn pair_stabilizer(
    v: &SetPartition,
    w: &SetPartition,
) -> Result<PairStabilizerReport, PermError> {
    if v.degree() != w.degree() {
        return Err(PermError::DegreeMismatch { left: v.degree(), right: w.degree() });
    }
    if v.block_count() != w.block_count() {
        return Err(PermError::BlockCountMismatch {
            left: v.block_count(),
            right: w.block_count(),
        });
    }
    let n = v.degree();
    let k = v.block_count();
    // Cells and their size matrix.
    let mut cells: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); k]; k];
    for point in 1..=n {
        cells[v.block_of(point)][w.block_of(point)].push(point);
    }
    let cell_sizes: Vec<Vec<u64>> = cells
        .iter()
        .map(|row| row.iter().map(|c| c.len() as u64).collect())
        .collect();

    let mut generators: Vec<Perm> = Vec::new();
    let mut order = FactoredNat::one();
    for row in &cells {
        for cell in row {
            generators.extend(symmetric_on(n, cell));
            order = order.mul(
                &crate::factnum::factorial_factored(cell.len() as u64, u64::MAX)
                    .expect("cell size is tiny"),
            );
        }
    }

    // Block-level pairs (sigma, tau) with cell_sizes[sigma(i)][tau(j)] =
    // cell_sizes[i][j]: generated by the column stabilizer of the matrix and
    // lifts of row-group generators.
    let (row_gens, row_order) = matrix_row_group(&cell_sizes);
    let (col_gens, col_order) = matrix_column_stabilizer(&cell_sizes);
    order = order.mul(&row_order).mul(&col_order);

    for (sigma, tau) in row_gens.into_iter().chain(col_gens) {
        generators.push(lift_block_pair(n, &cells, &sigma, &tau));
    }
    generators.retain(|g| !g.is_identity());
    generators.sort();
    generators.dedup();

    let contains_odd_element = generators.iter().any(|g| g.sign() == -1);
    Ok(PairStabilizerReport { generators, order, contains_odd_element, cell_sizes })
}

/// Lifts a block-permutation pair to a point permutation: the points of cell
/// `C_{ij}` map order-preservingly onto `C_{σ(i)τ(j)}`.
fn lift_block_pair(
    n: u32,
    cells: &[Vec<Vec<u32>>],
    sigma: &[usize],
    tau: &[usize],
) -> Perm {
    let k = cells.len();
    let mut images = vec![0u32; n as usize];
    for i in 0..k {
        for j in 0..k {
            let src = &cells[i][j];
            let dst = &cells[sigma[i]][tau[j]];
            debug_assert_eq!(src.len(), dst.len());
            for (a, b) in src.iter().zip(dst) {
                images[(a - 1) as usize] = b - 1;
            }
        }
    }
    Perm { images }
}

/// The group of column permutations fixing the matrix entrywise: the direct
/// product of symmetric groups on classes of identical columns. Returns
/// generator pairs `(identity, tau)` and the group order.
fn matrix_column_stabilizer(p: &[Vec<u64>]) -> (Vec<(Vec<usize>, Vec<usize>)>, FactoredNat) {
    let k = p.len();
    let column = |j: usize| -> Vec<u64> { (0..k).map(|i| p[i][j]).collect() };
    let mut classes: Vec<(Vec<u64>, Vec<usize>)> = Vec::new();
    for j in 0..k {
        let c = column(j);
        match classes.iter_mut().find(|(v, _)| *v == c) {
            Some((_, idxs)) => idxs.push(j),
            None => classes.push((c, vec![j])),
        }
    }
    let identity: Vec<usize> = (0..k).collect();
    let mut gens = Vec::new();
    let mut order = FactoredNat::one();
    for (_, idxs) in &classes {
        order = order.mul(
            &crate::factnum::factorial_factored(idxs.len() as u64, u64::MAX)
                .expect("class size is tiny"),
        );
        if idxs.len() >= 2 {
            let mut tau = identity.clone();
            tau.swap(idxs[0], idxs[1]);
            gens.push((identity.clone(), tau));
        }
        if idxs.len() >= 3 {
            let mut tau = identity.clone();
            for w in 0..idxs.len() {
                tau[idxs[w]] = idxs[(w + 1) % idxs.len()];
            }
            gens.push((identity.clone(), tau));
        }
    }
    (gens, order)
}

/// The group `R` of row permutations `sigma` admitting some column
/// permutation `tau` with `p[sigma(i)][tau(j)] = p[i][j]`, as generator
/// pairs `(sigma, tau)` plus `|R|`.
///
/// Computed as a stabilizer chain over row positions: for each level `i`,
/// the orbit of `i` under the stabilizer of `0..i-1` is grown by searching
/// for an element mapping `i` to each unreached candidate.
fn matrix_row_group(p: &[Vec<u64>]) -> (Vec<(Vec<usize>, Vec<usize>)>, FactoredNat) {
    let k = p.len();
    let mut gens: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut order = FactoredNat::one();
    for i in 0..k {
        // Generators found at this level (they fix rows 0..i-1; earlier
        // levels' generators move an earlier row, deeper ones don't exist
        // yet).
        let mut level_sigmas: Vec<Vec<usize>> = Vec::new();
        let closure = |sigmas: &[Vec<usize>]| -> Vec<usize> {
            let mut orbit = vec![i];
            let mut head = 0;
            while head < orbit.len() {
                let x = orbit[head];
                head += 1;
                for s in sigmas {
                    if !orbit.contains(&s[x]) {
                        orbit.push(s[x]);
                    }
                }
            }
            orbit
        };
        let mut orbit = vec![i];
        for c in (i + 1)..k {
            if orbit.contains(&c) {
                continue;
            }
            // Search for sigma in R with sigma(j) = j for j < i and
            // sigma(i) = c.
            let mut prefix: Vec<usize> = (0..i).collect();
            prefix.push(c);
            if let Some((sigma, tau)) = matrix_equiv_search(p, p, &prefix) {
                level_sigmas.push(sigma.clone());
                gens.push((sigma, tau));
                orbit = closure(&level_sigmas);
                debug_assert!(orbit.contains(&c));
            }
        }
        order = order.mul(
            &FactoredNat::from_u64(orbit.len() as u64).expect("orbit size is a small integer"),
        );
    }
    (gens, order)
}

/// Searches for `(sigma, tau)` with `q[i][j] = p[sigma(i)][tau(j)]` for all
/// `i, j`, honoring forced row assignments `sigma(i) = prefix[i]`.
///
/// Backtracks over the row assignment in index order, pruning with sorted
/// row multisets and partial-column multiset compatibility; the final
/// assignment is verified entry-for-entry before returning. Exhaustive: a
/// `None` is a proof of non-existence.
pub(crate) fn matrix_equiv_search(
    p: &[Vec<u64>],
    q: &[Vec<u64>],
    prefix: &[usize],
) -> Option<(Vec<usize>, Vec<usize>)> {
    let k = p.len();
    debug_assert!(q.len() == k && prefix.len() <= k);
    if k == 0 {
        return Some((Vec::new(), Vec::new()));
    }
    // Row multiset invariant: q's row i can only map to a p-row with the
    // same sorted content.
    let sorted_rows_p: Vec<Vec<u64>> = p
        .iter()
        .map(|r| {
            let mut s = r.clone();
            s.sort_unstable();
            s
        })
        .collect();
    let sorted_rows_q: Vec<Vec<u64>> = q
        .iter()
        .map(|r| {
            let mut s = r.clone();
            s.sort_unstable();
            s
        })
        .collect();

    let mut sigma: Vec<usize> = Vec::with_capacity(k);
    let mut used = vec![false; k];
    for (i, &c) in prefix.iter().enumerate() {
        if used[c] || sorted_rows_q[i] != sorted_rows_p[c] {
            return None;
        }
        sigma.push(c);
        used[c] = true;
    }
    if !partial_columns_compatible(p, q, &sigma) {
        return None;
    }

    fn recurse(
        p: &[Vec<u64>],
        q: &[Vec<u64>],
        sorted_rows_p: &[Vec<u64>],
        sorted_rows_q: &[Vec<u64>],
        sigma: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let k = p.len();
        let i = sigma.len();
        if i == k {
            return true;
        }
        for c in 0..k {
            if used[c] || sorted_rows_q[i] != sorted_rows_p[c] {
                continue;
            }
            sigma.push(c);
            used[c] = true;
            if partial_columns_compatible(p, q, sigma)
                && recurse(p, q, sorted_rows_p, sorted_rows_q, sigma, used)
            {
                return true;
            }
            sigma.pop();
            used[c] = false;
        }
        false
    }

    if !recurse(p, q, &sorted_rows_p, &sorted_rows_q, &mut sigma, &mut used) {
        return None;
    }
    // Extract tau by matching full columns of q against columns of p read
    // through sigma.
    let tau = match_columns(p, q, &sigma)?;
    // Paranoid final verification.
    for i in 0..k {
        for j in 0..k {
            if q[i][j] != p[sigma[i]][tau[j]] {
                return None;
            }
        }
    }
    Some((sigma, tau))
}

/// Partial-column compatibility: restricted to the assigned rows, the
/// multiset of q-columns must equal the multiset of sigma-read p-columns.
fn partial_columns_compatible(p: &[Vec<u64>], q: &[Vec<u64>], sigma: &[usize]) -> bool {
    let k = p.len();
    let d = sigma.len();
    if d == 0 {
        return true;
    }
    let mut p_cols: Vec<Vec<u64>> = (0..k)
        .map(|j| sigma.iter().map(|&si| p[si][j]).collect())
        .collect();
    let mut q_cols: Vec<Vec<u64>> = (0..k).map(|j| (0..d).map(|i| q[i][j]).collect()).collect();
    p_cols.sort_unstable();
    q_cols.sort_unstable();
    p_cols == q_cols
}

/// Matches columns of `q` to equal sigma-read columns of `p`, bijectively.
fn match_columns(p: &[Vec<u64>], q: &[Vec<u64>], sigma: &[usize]) -> Option<Vec<usize>> {
    let k = p.len();
    let p_col = |j: usize| -> Vec<u64> { sigma.iter().map(|&si| p[si][j]).collect() };
    let q_col = |j: usize| -> Vec<u64> { (0..q.len()).map(|i| q[i][j]).collect() };
    let mut taken = vec![false; k];
    let mut tau = vec![usize::MAX; k];
    for j in 0..k {
        let target = q_col(j);
        let mut found = false;
        for c in 0..k {
            if !taken[c] && p_col(c) == target {
                tau[j] = c;
                taken[c] = true;
                found = true;
                break;
            }
        }
        if !found {
            return None;
        }
    }
    Some(tau)
}

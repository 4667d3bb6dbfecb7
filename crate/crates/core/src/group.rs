//! Exact arithmetic for finite groups given by multiplication tables.
//!
//! Elements are dense indices `0..order` with the identity fixed at index 0;
//! every higher layer (words, presentations, families) speaks these indices.
//! Groups are built from a [`GroupSpec`] (cyclic, direct product, or explicit
//! table) and fully validated: associativity is checked on all triples, which
//! is why orders are capped at desk scale.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Hard ceiling on accepted group orders. Validation enumerates all
/// `order^3` triples, so this stays small on purpose.
pub const MAX_ORDER: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order must be at least 1")]
    EmptyGroup,
    #[error("group order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("multiplication table is ragged: row {row} has {len} entries, expected {order}")]
    RaggedTable { row: usize, len: usize, order: usize },
    #[error("table entry mult({x},{y}) = {value} is out of range for order {order}")]
    EntryOutOfRange {
        x: u32,
        y: u32,
        value: u32,
        order: usize,
    },
    #[error("index 0 is not an identity: mult({x},0) = {right}, mult(0,{x}) = {left}")]
    BadIdentity { x: u32, left: u32, right: u32 },
    #[error("element {x} has no two-sided inverse")]
    MissingInverse { x: u32 },
    #[error("table is not associative at triple ({x},{y},{z}): ({x}{y}){z} = {xy_z} but {x}({y}{z}) = {x_yz}")]
    NotAssociative {
        x: u32,
        y: u32,
        z: u32,
        xy_z: u32,
        x_yz: u32,
    },
    #[error("element index {index} is out of range for group of order {order}")]
    IndexOutOfRange { index: u32, order: usize },
    #[error("subgroup set is not closed: {x}*{y} = {product} is missing")]
    NotClosed { x: u32, y: u32, product: u32 },
    #[error("embedding map has {len} entries but the source group has order {order}")]
    MapWrongLength { len: usize, order: usize },
    #[error("embedding does not fix the identity: map(0) = {image}")]
    IdentityNotFixed { image: u32 },
    #[error("map is not a homomorphism at pair ({x},{y}): map({x}*{y}) = {expected} but map({x})*map({y}) = {got}")]
    NotAHomomorphism {
        x: u32,
        y: u32,
        expected: u32,
        got: u32,
    },
    #[error("map is not injective: both {x} and {y} map to {image}")]
    NotInjective { x: u32, y: u32, image: u32 },
    #[error("could not parse group spec {text:?}: {reason}")]
    BadSpec { text: String, reason: String },
}

/// How a finite group is described on input; see [`build_group`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(u32),
    Product(Vec<GroupSpec>),
    Table(Vec<Vec<u32>>),
}

impl GroupSpec {
    /// Parses the textual grammar `cyclic:n`, `product:[spec,spec,...]`,
    /// `table:[[...],[...]]` used by instance configs.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let text = text.trim();
        let bad = |reason: &str| GroupError::BadSpec {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        if let Some(rest) = text.strip_prefix("cyclic:") {
            let n: u32 = rest
                .trim()
                .parse()
                .map_err(|_| bad("expected an integer after `cyclic:`"))?;
            return Ok(GroupSpec::Cyclic(n));
        }
        if let Some(rest) = text.strip_prefix("product:") {
            let rest = rest.trim();
            let inner = rest
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| bad("expected `[spec,spec,...]` after `product:`"))?;
            let mut parts = Vec::new();
            let mut depth = 0usize;
            let mut start = 0usize;
            for (i, ch) in inner.char_indices() {
                match ch {
                    '[' => depth += 1,
                    ']' => depth = depth.saturating_sub(1),
                    ',' if depth == 0 => {
                        parts.push(&inner[start..i]);
                        start = i + 1;
                    }
                    _ => {}
                }
            }
            parts.push(&inner[start..]);
            let specs = parts
                .into_iter()
                .filter(|p| !p.trim().is_empty())
                .map(GroupSpec::parse)
                .collect::<Result<Vec<_>, _>>()?;
            if specs.is_empty() {
                return Err(bad("product of zero groups"));
            }
            return Ok(GroupSpec::Product(specs));
        }
        if let Some(rest) = text.strip_prefix("table:") {
            let rows: Vec<Vec<u32>> = parse_table(rest.trim()).ok_or_else(|| {
                bad("expected `[[...],[...]]` of element indices after `table:`")
            })?;
            return Ok(GroupSpec::Table(rows));
        }
        Err(bad("expected `cyclic:`, `product:` or `table:` prefix"))
    }
}

fn parse_table(text: &str) -> Option<Vec<Vec<u32>>> {
    let inner = text.strip_prefix('[')?.strip_suffix(']')?;
    let mut rows = Vec::new();
    let mut rest = inner.trim_start();
    while !rest.is_empty() {
        rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
        if rest.is_empty() {
            break;
        }
        let row_end = rest.find(']')?;
        let row_text = rest[..row_end].strip_prefix('[')?;
        let mut row = Vec::new();
        for piece in row_text.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            row.push(piece.parse().ok()?);
        }
        rows.push(row);
        rest = rest[row_end + 1..].trim_start();
    }
    Some(rows)
}

/// A finite group as a validated multiplication table with identity index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mult: Vec<u32>,
    inv: Vec<u32>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        debug_assert!((x as usize) < self.order && (y as usize) < self.order);
        self.mult[x as usize * self.order + y as usize]
    }

    #[inline]
    pub fn inv(&self, x: u32) -> u32 {
        debug_assert!((x as usize) < self.order);
        self.inv[x as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        0..self.order as u32
    }

    pub fn contains(&self, x: u32) -> bool {
        (x as usize) < self.order
    }

    pub fn check_index(&self, x: u32) -> Result<(), GroupError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(GroupError::IndexOutOfRange {
                index: x,
                order: self.order,
            })
        }
    }

    /// Product of a sequence of element indices (identity for the empty one).
    pub fn product(&self, xs: &[u32]) -> u32 {
        xs.iter().fold(0, |acc, &x| self.mul(acc, x))
    }
}

/// Builds and validates a group from its spec.
///
/// Cyclic and product tables are generated; explicit tables are taken as
/// given. Either way the result is checked for identity, two-sided inverses
/// and associativity on all triples, and errors name the failing entry.
pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup, GroupError> {
    let table = table_for(spec)?;
    validate_table(table)
}

fn table_for(spec: &GroupSpec) -> Result<Vec<Vec<u32>>, GroupError> {
    match spec {
        GroupSpec::Cyclic(0) => Err(GroupError::EmptyGroup),
        GroupSpec::Cyclic(n) => {
            let n = *n as usize;
            if n > MAX_ORDER {
                return Err(GroupError::OrderTooLarge(n));
            }
            Ok((0..n)
                .map(|i| (0..n).map(|j| ((i + j) % n) as u32).collect())
                .collect())
        }
        GroupSpec::Product(specs) => {
            let factors = specs
                .iter()
                .map(build_group)
                .collect::<Result<Vec<_>, _>>()?;
            let order: usize = factors.iter().map(FiniteGroup::order).product();
            if order > MAX_ORDER {
                return Err(GroupError::OrderTooLarge(order));
            }
            // Mixed-radix indexing, most significant factor first.
            let unrank = |mut idx: usize| -> Vec<u32> {
                let mut digits = vec![0u32; factors.len()];
                for (slot, g) in factors.iter().enumerate().rev() {
                    digits[slot] = (idx % g.order()) as u32;
                    idx /= g.order();
                }
                digits
            };
            let rank = |digits: &[u32]| -> u32 {
                let mut idx = 0usize;
                for (slot, g) in factors.iter().enumerate() {
                    idx = idx * g.order() + digits[slot] as usize;
                }
                idx as u32
            };
            let mut table = vec![vec![0u32; order]; order];
            #[allow(clippy::needless_range_loop)]
            for i in 0..order {
                let di = unrank(i);
                for j in 0..order {
                    let dj = unrank(j);
                    let prod: Vec<u32> = factors
                        .iter()
                        .enumerate()
                        .map(|(s, g)| g.mul(di[s], dj[s]))
                        .collect();
                    table[i][j] = rank(&prod);
                }
            }
            Ok(table)
        }
        GroupSpec::Table(rows) => Ok(rows.clone()),
    }
}

fn validate_table(rows: Vec<Vec<u32>>) -> Result<FiniteGroup, GroupError> {
    let order = rows.len();
    if order == 0 {
        return Err(GroupError::EmptyGroup);
    }
    if order > MAX_ORDER {
        return Err(GroupError::OrderTooLarge(order));
    }
    let mut mult = vec![0u32; order * order];
    for (i, row) in rows.iter().enumerate() {
        if row.len() != order {
            return Err(GroupError::RaggedTable {
                row: i,
                len: row.len(),
                order,
            });
        }
        for (j, &v) in row.iter().enumerate() {
            if v as usize >= order {
                return Err(GroupError::EntryOutOfRange {
                    x: i as u32,
                    y: j as u32,
                    value: v,
                    order,
                });
            }
            mult[i * order + j] = v;
        }
    }
    let at = |x: usize, y: usize| mult[x * order + y];
    for x in 0..order {
        if at(x, 0) as usize != x || at(0, x) as usize != x {
            return Err(GroupError::BadIdentity {
                x: x as u32,
                left: at(0, x),
                right: at(x, 0),
            });
        }
    }
    let mut inv = vec![u32::MAX; order];
    #[allow(clippy::needless_range_loop)]
    for x in 0..order {
        match (0..order).find(|&y| at(x, y) == 0 && at(y, x) == 0) {
            Some(y) => inv[x] = y as u32,
            None => return Err(GroupError::MissingInverse { x: x as u32 }),
        }
    }
    for x in 0..order {
        for y in 0..order {
            let xy = at(x, y) as usize;
            for z in 0..order {
                let xy_z = at(xy, z);
                let x_yz = at(x, at(y, z) as usize);
                if xy_z != x_yz {
                    return Err(GroupError::NotAssociative {
                        x: x as u32,
                        y: y as u32,
                        z: z as u32,
                        xy_z,
                        x_yz,
                    });
                }
            }
        }
    }
    Ok(FiniteGroup { order, mult, inv })
}

/// A subgroup, stored as its sorted element set plus a membership mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent_order: usize,
    elements: Vec<u32>,
    mask: Vec<bool>,
}

impl Subgroup {
    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        (x as usize) < self.parent_order && self.mask[x as usize]
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    /// Validates an explicit element list as a subgroup of `group`.
    pub fn from_elements(group: &FiniteGroup, elems: &[u32]) -> Result<Self, GroupError> {
        let mut set: BTreeSet<u32> = BTreeSet::new();
        set.insert(0);
        for &e in elems {
            group.check_index(e)?;
            set.insert(e);
        }
        let elements: Vec<u32> = set.into_iter().collect();
        for &x in &elements {
            let ix = group.inv(x);
            if !elements.binary_search(&ix).is_ok() {
                return Err(GroupError::NotClosed {
                    x,
                    y: ix,
                    product: 0,
                });
            }
            for &y in &elements {
                let p = group.mul(x, y);
                if !elements.binary_search(&p).is_ok() {
                    return Err(GroupError::NotClosed { x, y, product: p });
                }
            }
        }
        let mut mask = vec![false; group.order()];
        for &e in &elements {
            mask[e as usize] = true;
        }
        Ok(Subgroup {
            parent_order: group.order(),
            elements,
            mask,
        })
    }

    /// Reindexes the subgroup as a standalone group.
    ///
    /// Subgroup elements are renumbered `0..order` in sorted order except
    /// that the identity keeps index 0 (it is the smallest anyway). Returns
    /// the abstract group together with the map sub-index -> parent index.
    pub fn as_group(&self, group: &FiniteGroup) -> (FiniteGroup, Vec<u32>) {
        let to_parent = self.elements.clone();
        let mut to_sub = vec![u32::MAX; group.order()];
        for (i, &e) in to_parent.iter().enumerate() {
            to_sub[e as usize] = i as u32;
        }
        let n = to_parent.len();
        let mut rows = vec![vec![0u32; n]; n];
        for i in 0..n {
            for j in 0..n {
                rows[i][j] = to_sub[group.mul(to_parent[i], to_parent[j]) as usize];
            }
        }
        let sub = validate_table(rows).expect("subgroup table is a valid group");
        (sub, to_parent)
    }
}

/// Smallest subgroup of `group` containing `gens`.
pub fn subgroup_closure(group: &FiniteGroup, gens: &[u32]) -> Result<Subgroup, GroupError> {
    for &g in gens {
        group.check_index(g)?;
    }
    let mut mask = vec![false; group.order()];
    mask[0] = true;
    let mut queue: Vec<u32> = vec![0];
    for &g in gens {
        if !mask[g as usize] {
            mask[g as usize] = true;
            queue.push(g);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let ix = group.inv(x);
        if !mask[ix as usize] {
            mask[ix as usize] = true;
            queue.push(ix);
        }
        for i in 0..queue.len() {
            let y = queue[i];
            for p in [group.mul(x, y), group.mul(y, x)] {
                if !mask[p as usize] {
                    mask[p as usize] = true;
                    queue.push(p);
                }
            }
        }
    }
    let elements: Vec<u32> = (0..group.order() as u32).filter(|&e| mask[e as usize]).collect();
    Ok(Subgroup {
        parent_order: group.order(),
        elements,
        mask,
    })
}

/// The partition of `group` into double cosets `H g K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCosets {
    classes: Vec<Vec<u32>>,
}

impl DoubleCosets {
    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn count(&self) -> usize {
        self.classes.len()
    }

    /// The class containing `x`.
    pub fn class_of(&self, x: u32) -> Option<&[u32]> {
        self.classes
            .iter()
            .find(|c| c.binary_search(&x).is_ok())
            .map(|c| c.as_slice())
    }
}

/// Partitions `group` into `H g K` classes, ordered by least representative.
pub fn double_cosets(group: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> DoubleCosets {
    let mut seen = vec![false; group.order()];
    let mut classes = Vec::new();
    for g in 0..group.order() as u32 {
        if seen[g as usize] {
            continue;
        }
        let mut class = Vec::new();
        for &a in h.elements() {
            let ag = group.mul(a, g);
            for &b in k.elements() {
                let agb = group.mul(ag, b);
                if !seen[agb as usize] {
                    seen[agb as usize] = true;
                    class.push(agb);
                }
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    DoubleCosets { classes }
}

/// A validated injective homomorphism between finite groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    source_order: usize,
    target_order: usize,
    map: Vec<u32>,
    image_mask: Vec<bool>,
    preimage: Vec<Option<u32>>,
}

impl Embedding {
    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.map[x as usize]
    }

    #[inline]
    pub fn in_image(&self, y: u32) -> bool {
        (y as usize) < self.target_order && self.image_mask[y as usize]
    }

    /// Source element mapping to `y`, when `y` lies in the image.
    #[inline]
    pub fn preimage(&self, y: u32) -> Option<u32> {
        self.preimage.get(y as usize).copied().flatten()
    }

    pub fn source_order(&self) -> usize {
        self.source_order
    }

    /// Sorted image set, as a subgroup-like element list.
    pub fn image_elements(&self) -> Vec<u32> {
        (0..self.target_order as u32)
            .filter(|&y| self.image_mask[y as usize])
            .collect()
    }
}

/// Validates `map` as an injective homomorphism `source -> target`.
pub fn check_embedding(
    source: &FiniteGroup,
    target: &FiniteGroup,
    map: &[u32],
) -> Result<Embedding, GroupError> {
    if map.len() != source.order() {
        return Err(GroupError::MapWrongLength {
            len: map.len(),
            order: source.order(),
        });
    }
    for &v in map {
        target.check_index(v)?;
    }
    if map[0] != 0 {
        return Err(GroupError::IdentityNotFixed { image: map[0] });
    }
    for x in 0..source.order() as u32 {
        for y in 0..source.order() as u32 {
            let expected = map[source.mul(x, y) as usize];
            let got = target.mul(map[x as usize], map[y as usize]);
            if expected != got {
                return Err(GroupError::NotAHomomorphism { x, y, expected, got });
            }
        }
    }
    let mut owner: Vec<Option<u32>> = vec![None; target.order()];
    for x in 0..source.order() as u32 {
        let image = map[x as usize];
        if let Some(prev) = owner[image as usize] {
            return Err(GroupError::NotInjective { x: prev, y: x, image });
        }
        owner[image as usize] = Some(x);
    }
    let image_mask = owner.iter().map(Option::is_some).collect();
    Ok(Embedding {
        source_order: source.order(),
        target_order: target.order(),
        map: map.to_vec(),
        image_mask,
        preimage: owner,
    })
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group of order {}", self.order)
    }
}

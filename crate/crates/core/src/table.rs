//! Information tables and the classical rough-set operations over them.
//!
//! An [`InformationTable`] is a universe of objects described by an ordered
//! list of attributes. Object sets are bitsets over the universe (see
//! [`ObjectSet`]) so set algebra stays cheap and results come back in
//! insertion order.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::value::{AttributeValue, ValueKey};

macro_rules! identifier {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(String);

        impl $name {
            pub fn new(name: impl Into<String>) -> Result<Self> {
                let name = name.into();
                if name.is_empty() {
                    return Err(Error::EmptyIdentifier);
                }
                Ok(Self(name))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }

        impl std::borrow::Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

identifier!(
    /// Name of a column in an information table.
    AttributeId
);
identifier!(
    /// Identifier of a row (a registered resource).
    ObjectId
);

/// A subset of a table's universe, stored as a bitset over row indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ObjectSet {
    bits: FixedBitSet,
}

impl ObjectSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        Self { bits }
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(universe);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Size of the universe this set lives in.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.bits.contains(index)
    }

    /// Panics if `index` lies outside the universe.
    pub fn insert(&mut self, index: usize) {
        self.bits.insert(index);
    }

    pub fn remove(&mut self, index: usize) {
        self.bits.set(index, false);
    }

    /// Member indices in ascending (insertion) order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn is_subset(&self, other: &ObjectSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &ObjectSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn union(&self, other: &ObjectSet) -> ObjectSet {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        ObjectSet { bits }
    }

    pub fn intersection(&self, other: &ObjectSet) -> ObjectSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        ObjectSet { bits }
    }

    pub fn difference(&self, other: &ObjectSet) -> ObjectSet {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        ObjectSet { bits }
    }

    pub fn complement(&self) -> ObjectSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        ObjectSet { bits }
    }
}

impl fmt::Debug for ObjectSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Equivalence classes of the universe under an attribute set.
///
/// Blocks are ordered by their smallest member and members are ascending, so two
/// partitions are equal exactly when they describe the same equivalence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    fn from_labels(block_of: Vec<usize>, count: usize) -> Self {
        let mut blocks = vec![Vec::new(); count];
        for (i, &b) in block_of.iter().enumerate() {
            blocks[b].push(i);
        }
        Partition { block_of, blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.block_of.len()
    }

    /// Index of the block holding `object`.
    pub fn block_index(&self, object: usize) -> usize {
        self.block_of[object]
    }

    /// The equivalence class `[object]`.
    pub fn class_of(&self, object: usize) -> &[usize] {
        &self.blocks[self.block_of[object]]
    }

    /// `|block ∩ set|` for every block, in block order.
    pub fn overlaps(&self, set: &ObjectSet) -> Vec<usize> {
        let mut counts = vec![0; self.blocks.len()];
        for i in set.iter() {
            counts[self.block_of[i]] += 1;
        }
        counts
    }

    /// Union of the blocks wholly contained in `set`.
    pub fn lower(&self, set: &ObjectSet) -> ObjectSet {
        let overlaps = self.overlaps(set);
        self.collect_blocks(|b| overlaps[b] == self.blocks[b].len())
    }

    /// Union of the blocks that meet `set`.
    pub fn upper(&self, set: &ObjectSet) -> ObjectSet {
        let overlaps = self.overlaps(set);
        self.collect_blocks(|b| overlaps[b] > 0)
    }

    /// Whether every block of `self` sits inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.blocks.iter().all(|block| {
            let target = coarser.block_of[block[0]];
            block.iter().all(|&i| coarser.block_of[i] == target)
        })
    }

    fn collect_blocks(&self, mut keep: impl FnMut(usize) -> bool) -> ObjectSet {
        let mut out = ObjectSet::empty(self.universe());
        for (b, block) in self.blocks.iter().enumerate() {
            if keep(b) {
                for &i in block {
                    out.insert(i);
                }
            }
        }
        out
    }
}

/// Universe of objects × attributes with one value per cell.
///
/// Immutable once built. Cell values are additionally interned per column so
/// that partitioning only compares small integer codes.
#[derive(Debug, Clone)]
pub struct InformationTable {
    objects: Vec<ObjectId>,
    object_index: HashMap<ObjectId, usize>,
    attributes: Vec<AttributeId>,
    attribute_index: HashMap<AttributeId, usize>,
    cells: Vec<AttributeValue>,
    codes: Vec<u32>,
}

/// Incremental constructor for [`InformationTable`].
#[derive(Debug)]
pub struct TableBuilder {
    objects: Vec<ObjectId>,
    object_index: HashMap<ObjectId, usize>,
    attributes: Vec<AttributeId>,
    attribute_index: HashMap<AttributeId, usize>,
    cells: Vec<AttributeValue>,
}

impl TableBuilder {
    /// Appends a row; `values` follow the table's attribute order.
    pub fn row(&mut self, id: ObjectId, values: Vec<AttributeValue>) -> Result<&mut Self> {
        if values.len() != self.attributes.len() {
            return Err(Error::RowWidth {
                object: id.to_string(),
                expected: self.attributes.len(),
                found: values.len(),
            });
        }
        if self.object_index.contains_key(&id) {
            return Err(Error::DuplicateObject(id.to_string()));
        }
        for v in &values {
            if let AttributeValue::Real(r) = v {
                if !r.is_finite() {
                    return Err(Error::NonFiniteReal(*r));
                }
            }
        }
        self.object_index.insert(id.clone(), self.objects.len());
        self.objects.push(id);
        self.cells.extend(values.into_iter().map(|v| match v {
            // folds -0.0 into 0.0
            AttributeValue::Real(0.0) => AttributeValue::Real(0.0),
            v => v,
        }));
        Ok(self)
    }

    pub fn build(self) -> InformationTable {
        let width = self.attributes.len();
        let mut codes = vec![0u32; self.cells.len()];
        for col in 0..width {
            // code 0 is reserved for Null
            let mut interned: HashMap<ValueKey<'_>, u32> = HashMap::new();
            for (row, chunk) in self.cells.chunks(width).enumerate() {
                let key = chunk[col].key();
                if key != ValueKey::Null {
                    let next = interned.len() as u32 + 1;
                    codes[row * width + col] = *interned.entry(key).or_insert(next);
                }
            }
        }
        InformationTable {
            objects: self.objects,
            object_index: self.object_index,
            attributes: self.attributes,
            attribute_index: self.attribute_index,
            cells: self.cells,
            codes,
        }
    }
}

impl InformationTable {
    pub fn builder(attributes: Vec<AttributeId>) -> Result<TableBuilder> {
        let mut attribute_index = HashMap::with_capacity(attributes.len());
        for (i, a) in attributes.iter().enumerate() {
            if attribute_index.insert(a.clone(), i).is_some() {
                return Err(Error::DuplicateAttribute(a.to_string()));
            }
        }
        Ok(TableBuilder {
            objects: Vec::new(),
            object_index: HashMap::new(),
            attributes,
            attribute_index,
            cells: Vec::new(),
        })
    }

    /// Convenience constructor from string names, mostly for tests and fixtures.
    pub fn from_rows<A, O>(attributes: &[A], rows: Vec<(O, Vec<AttributeValue>)>) -> Result<Self>
    where
        A: AsRef<str>,
        O: Into<String>,
    {
        let attrs = attributes
            .iter()
            .map(|a| AttributeId::new(a.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let mut builder = Self::builder(attrs)?;
        for (id, values) in rows {
            builder.row(ObjectId::new(id)?, values)?;
        }
        Ok(builder.build())
    }

    pub fn objects(&self) -> &[ObjectId] {
        &self.objects
    }

    pub fn attributes(&self) -> &[AttributeId] {
        &self.attributes
    }

    pub fn universe_len(&self) -> usize {
        self.objects.len()
    }

    pub fn object_index(&self, id: &str) -> Result<usize> {
        self.object_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownObject(id.to_owned()))
    }

    pub fn attribute_index(&self, name: &str) -> Result<usize> {
        self.attribute_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownAttribute(name.to_owned()))
    }

    pub fn value(&self, object: usize, attribute: usize) -> &AttributeValue {
        &self.cells[object * self.attributes.len() + attribute]
    }

    pub fn row(&self, object: usize) -> &[AttributeValue] {
        let w = self.attributes.len();
        &self.cells[object * w..(object + 1) * w]
    }

    /// Resolves object names into a set; unknown names are an error.
    pub fn object_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<ObjectSet> {
        let mut set = ObjectSet::empty(self.objects.len());
        for id in ids {
            set.insert(self.object_index(id.as_ref())?);
        }
        Ok(set)
    }

    pub fn ids<'a>(&'a self, set: &'a ObjectSet) -> impl Iterator<Item = &'a ObjectId> + 'a {
        set.iter().map(move |i| &self.objects[i])
    }

    pub fn full_set(&self) -> ObjectSet {
        ObjectSet::full(self.objects.len())
    }

    pub(crate) fn check_set(&self, set: &ObjectSet) -> Result<()> {
        if set.universe() != self.objects.len() {
            return Err(Error::UniverseMismatch {
                expected: self.objects.len(),
                found: set.universe(),
            });
        }
        Ok(())
    }

    pub(crate) fn resolve_attributes<S: AsRef<str>>(&self, attrs: &[S]) -> Result<Vec<usize>> {
        if attrs.is_empty() {
            return Err(Error::EmptyAttributeSet);
        }
        let mut cols = attrs
            .iter()
            .map(|a| self.attribute_index(a.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        cols.sort_unstable();
        cols.dedup();
        Ok(cols)
    }

    /// Equivalence classes of `U` under `attrs`: two objects share a block iff
    /// they agree on every listed attribute.
    pub fn partition<S: AsRef<str>>(&self, attrs: &[S]) -> Result<Partition> {
        let cols = self.resolve_attributes(attrs)?;
        Ok(self.partition_columns(&cols))
    }

    pub(crate) fn partition_columns(&self, cols: &[usize]) -> Partition {
        let n = self.objects.len();
        let w = self.attributes.len();
        let mut labels = vec![0usize; n];
        let mut count = usize::from(n > 0);
        let mut refined: HashMap<(usize, u32), usize> = HashMap::with_capacity(n);
        for &col in cols {
            refined.clear();
            for (row, label) in labels.iter_mut().enumerate() {
                let key = (*label, self.codes[row * w + col]);
                let next = refined.len();
                *label = *refined.entry(key).or_insert(next);
            }
            count = refined.len();
        }
        Partition::from_labels(labels, count)
    }

    /// `{x : [x]_attrs ⊆ set}`.
    pub fn lower_approx<S: AsRef<str>>(&self, attrs: &[S], set: &ObjectSet) -> Result<ObjectSet> {
        self.check_set(set)?;
        Ok(self.partition(attrs)?.lower(set))
    }

    /// `{x : [x]_attrs ∩ set ≠ ∅}`.
    pub fn upper_approx<S: AsRef<str>>(&self, attrs: &[S], set: &ObjectSet) -> Result<ObjectSet> {
        self.check_set(set)?;
        Ok(self.partition(attrs)?.upper(set))
    }

    /// Objects whose `condition` class lies inside a single `decision` class,
    /// i.e. the union of the lower approximations of the decision blocks.
    pub fn positive_region<C: AsRef<str>, D: AsRef<str>>(
        &self,
        condition: &[C],
        decision: &[D],
    ) -> Result<ObjectSet> {
        let c = self.partition(condition)?;
        let d = self.partition(decision)?;
        Ok(positive_region_of(&c, &d))
    }

    /// `|POS_C(D)| / |U|`.
    pub fn dependency_degree<C: AsRef<str>, D: AsRef<str>>(
        &self,
        condition: &[C],
        decision: &[D],
    ) -> Result<f64> {
        if self.objects.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        let pos = self.positive_region(condition, decision)?;
        Ok(pos.len() as f64 / self.objects.len() as f64)
    }

    /// Drops attributes that are totally determined by the remaining ones.
    ///
    /// Single greedy pass from the last attribute to the first (in the order
    /// given), so of two duplicated columns the later one goes. An attribute is
    /// only dropped while at least one other attribute survives. Not a minimal
    /// reduct, but every dropped attribute depends totally on the survivors.
    pub fn reduce_dependent_attributes<S: AsRef<str>>(&self, attrs: &[S]) -> Result<Vec<AttributeId>> {
        if attrs.len() < 2 {
            return Err(Error::TooFewAttributes(attrs.len()));
        }
        let mut kept: Vec<usize> = Vec::with_capacity(attrs.len());
        for a in attrs {
            let col = self.attribute_index(a.as_ref())?;
            if !kept.contains(&col) {
                kept.push(col);
            }
        }
        for pos in (0..kept.len()).rev() {
            if kept.len() < 2 {
                break;
            }
            let candidate = kept[pos];
            let rest: Vec<usize> = kept.iter().copied().filter(|&c| c != candidate).collect();
            let rest_partition = self.partition_columns(&rest);
            let own = self.partition_columns(&[candidate]);
            if rest_partition.refines(&own) {
                kept.remove(pos);
            }
        }
        Ok(kept.into_iter().map(|c| self.attributes[c].clone()).collect())
    }
}

fn positive_region_of(condition: &Partition, decision: &Partition) -> ObjectSet {
    condition.collect_blocks(|b| {
        let block = &condition.blocks[b];
        let target = decision.block_of[block[0]];
        block.iter().all(|&i| decision.block_of[i] == target)
    })
}

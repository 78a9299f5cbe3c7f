use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;

use fixedbitset::FixedBitSet;

/// Dense index of a vertex inside one [`RootedDigraph`](crate::RootedDigraph).
///
/// Indices follow the lexicographic order of the vertex names, so comparing
/// two ids is the same as comparing their names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub(crate) usize);

/// Dense index of an edge inside one [`RootedDigraph`](crate::RootedDigraph),
/// ordered like the edge names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub(crate) usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

pub trait DenseId: Copy + Ord + Hash + fmt::Debug {
    fn from_index(index: usize) -> Self;
    fn to_index(self) -> usize;
}

impl DenseId for VertexId {
    fn from_index(index: usize) -> Self {
        VertexId(index)
    }
    fn to_index(self) -> usize {
        self.0
    }
}

impl DenseId for EdgeId {
    fn from_index(index: usize) -> Self {
        EdgeId(index)
    }
    fn to_index(self) -> usize {
        self.0
    }
}

/// A set of vertex or edge ids of one digraph, stored as a bitset over the
/// digraph's id universe.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdSet<I> {
    bits: FixedBitSet,
    _id: PhantomData<I>,
}

pub type EdgeSet = IdSet<EdgeId>;
pub type VertexSet = IdSet<VertexId>;

impl<I: DenseId> IdSet<I> {
    /// Empty set over a universe of `universe` ids.
    pub fn empty(universe: usize) -> Self {
        IdSet {
            bits: FixedBitSet::with_capacity(universe),
            _id: PhantomData,
        }
    }

    /// The set containing every id of the universe.
    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        IdSet {
            bits,
            _id: PhantomData,
        }
    }

    pub fn from_ids(universe: usize, ids: impl IntoIterator<Item = I>) -> Self {
        let mut set = Self::empty(universe);
        for id in ids {
            set.insert(id);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, id: I) -> bool {
        let present = self.bits.put(id.to_index());
        !present
    }

    pub fn remove(&mut self, id: I) -> bool {
        let present = self.bits.contains(id.to_index());
        self.bits.set(id.to_index(), false);
        present
    }

    pub fn contains(&self, id: I) -> bool {
        self.bits.contains(id.to_index())
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Members in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = I> + '_ {
        self.bits.ones().map(I::from_index)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.bits.union_with(&other.bits);
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.bits.intersect_with(&other.bits);
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.bits.difference_with(&other.bits);
        out
    }

    /// Complement inside the universe.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        out.bits.toggle_range(..);
        out
    }

    pub fn union_with(&mut self, other: &Self) {
        self.bits.union_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &Self) {
        self.bits.difference_with(&other.bits);
    }
}

impl<I: DenseId> fmt::Debug for IdSet<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

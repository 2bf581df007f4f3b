//! Lazily materialised homogeneous tree.
//!
//! Vertices are created on first touch and addressed by `(parent, child
//! index)` through a hash map, so memory follows the explored region rather
//! than the depth. The root has `d + 1` children; every other vertex has `d`
//! children and a parent. Neighbour `j` of a vertex is child `j`, except that
//! neighbour `d` of a non-root vertex is its parent.

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(u32);

impl VertexId {
    pub const ROOT: VertexId = VertexId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A vertex named by its path of child indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vertex {
    path: Vec<u32>,
}

impl Vertex {
    pub fn root() -> Self {
        Vertex::default()
    }

    /// Validates indices: `0..=d` at the first position, `0..d` after.
    pub fn from_path(path: Vec<u32>, d: u32) -> Result<Self> {
        for (i, &c) in path.iter().enumerate() {
            let limit = if i == 0 { d + 1 } else { d };
            if c >= limit {
                return Err(Error::Invalid(format!(
                    "child index {c} at position {i} exceeds {}",
                    limit - 1
                )));
            }
        }
        Ok(Vertex { path })
    }

    pub fn path(&self) -> &[u32] {
        &self.path
    }

    pub fn depth(&self) -> usize {
        self.path.len()
    }

    /// Strict ancestor order: `self < other` iff `self` lies on the path from
    /// the root to `other` and differs from it.
    pub fn is_strict_ancestor_of(&self, other: &Vertex) -> bool {
        self.path.len() < other.path.len() && other.path.starts_with(&self.path)
    }
}

const ROOT_KEY: u64 = 0x6a09_e667_f3bc_c908;

/// SplitMix64 finaliser.
pub(crate) fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn child_key(parent: u64, index: u32) -> u64 {
    mix64(parent ^ mix64(index as u64 + 1))
}

#[derive(Debug, Clone)]
struct Node {
    parent: u32,
    child_index: u32,
    depth: u32,
    key: u64,
}

/// Lazy vertex store with a payload `T` per materialised vertex.
#[derive(Debug, Clone)]
pub struct LazyTree<T> {
    d: u32,
    nodes: Vec<Node>,
    data: Vec<T>,
    children: HashMap<(u32, u32), u32>,
    max_vertices: usize,
}

impl<T: Default> LazyTree<T> {
    pub fn new(d: u32, max_vertices: usize) -> Self {
        let mut tree = LazyTree {
            d,
            nodes: Vec::new(),
            data: Vec::new(),
            children: HashMap::new(),
            max_vertices: max_vertices.max(1),
        };
        tree.push_root();
        tree
    }

    fn push_root(&mut self) {
        self.nodes.push(Node {
            parent: u32::MAX,
            child_index: 0,
            depth: 0,
            key: ROOT_KEY,
        });
        self.data.push(T::default());
    }

    /// Drops every vertex except a fresh root.
    pub fn clear(&mut self) {
        self.nodes.clear();
        self.data.clear();
        self.children.clear();
        self.push_root();
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_root(&self, v: VertexId) -> bool {
        v.0 == 0
    }

    pub fn depth(&self, v: VertexId) -> u32 {
        self.nodes[v.index()].depth
    }

    /// Hash of the vertex's path; equal paths give equal keys in any tree.
    pub fn key(&self, v: VertexId) -> u64 {
        self.nodes[v.index()].key
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        let p = self.nodes[v.index()].parent;
        (p != u32::MAX).then_some(VertexId(p))
    }

    pub fn get(&self, v: VertexId) -> &T {
        &self.data[v.index()]
    }

    pub fn get_mut(&mut self, v: VertexId) -> &mut T {
        &mut self.data[v.index()]
    }

    // true when neighbour j of v is its parent
    fn decode(&self, v: VertexId, j: u32) -> bool {
        debug_assert!(j <= self.d);
        !self.is_root(v) && j == self.d
    }

    /// Neighbour `j` of `v` if it has been materialised.
    pub fn neighbour(&self, v: VertexId, j: u32) -> Option<VertexId> {
        if self.decode(v, j) {
            self.parent(v)
        } else {
            self.children.get(&(v.0, j)).map(|&c| VertexId(c))
        }
    }

    /// Whether neighbour `j` of `v` is its parent.
    pub fn is_parent_step(&self, v: VertexId, j: u32) -> bool {
        self.decode(v, j)
    }

    /// Neighbour `j` of `v`, creating it if needed. The flag is true when the
    /// vertex was created by this call.
    pub fn neighbour_or_insert(&mut self, v: VertexId, j: u32) -> Result<(VertexId, bool)> {
        if self.decode(v, j) {
            return Ok((self.parent(v).expect("non-root has a parent"), false));
        }
        if let Some(&c) = self.children.get(&(v.0, j)) {
            return Ok((VertexId(c), false));
        }
        if self.nodes.len() >= self.max_vertices {
            return Err(Error::VertexStoreFull(self.max_vertices));
        }
        let id = self.nodes.len() as u32;
        let parent = &self.nodes[v.index()];
        let node = Node {
            parent: v.0,
            child_index: j,
            depth: parent.depth + 1,
            key: child_key(parent.key, j),
        };
        self.nodes.push(node);
        self.data.push(T::default());
        self.children.insert((v.0, j), id);
        Ok((VertexId(id), true))
    }

    pub fn vertex(&self, v: VertexId) -> Vertex {
        let mut path = Vec::with_capacity(self.depth(v) as usize);
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            path.push(self.nodes[cur.index()].child_index);
            cur = p;
        }
        path.reverse();
        Vertex { path }
    }

    /// Looks up a vertex by path without creating anything.
    pub fn find(&self, vertex: &Vertex) -> Option<VertexId> {
        let mut cur = VertexId::ROOT;
        for &c in vertex.path() {
            cur = VertexId(*self.children.get(&(cur.0, c))?);
        }
        Some(cur)
    }

    /// Materialises the vertex at `vertex`'s path, creating missing ancestors.
    pub fn insert_path(&mut self, vertex: &Vertex) -> Result<VertexId> {
        let mut cur = VertexId::ROOT;
        for &c in vertex.path() {
            cur = self.neighbour_or_insert(cur, c)?.0;
        }
        Ok(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_has_d_plus_one_children() {
        let mut t: LazyTree<()> = LazyTree::new(2, 100);
        let kids: Vec<_> = (0..=2)
            .map(|j| t.neighbour_or_insert(VertexId::ROOT, j).unwrap().0)
            .collect();
        assert_eq!(t.len(), 4);
        for &k in &kids {
            assert_eq!(t.parent(k), Some(VertexId::ROOT));
            assert_eq!(t.depth(k), 1);
            // neighbour d of a non-root vertex is its parent
            assert_eq!(t.neighbour(k, 2), Some(VertexId::ROOT));
        }
    }

    #[test]
    fn path_round_trip_and_keys() {
        let mut a: LazyTree<()> = LazyTree::new(3, 1000);
        let mut b: LazyTree<()> = LazyTree::new(3, 1000);
        let v = Vertex::from_path(vec![3, 0, 2, 1], 3).unwrap();
        let ia = a.insert_path(&v).unwrap();
        // build the same vertex in a different order in b
        b.insert_path(&Vertex::from_path(vec![1, 1], 3).unwrap()).unwrap();
        let ib = b.insert_path(&v).unwrap();
        assert_eq!(a.vertex(ia), v);
        assert_eq!(a.key(ia), b.key(ib));
        assert_eq!(a.find(&v), Some(ia));
        assert!(Vertex::from_path(vec![0, 3], 3).is_err());
    }

    #[test]
    fn ancestor_order() {
        let root = Vertex::root();
        let v = Vertex::from_path(vec![1, 0], 2).unwrap();
        let w = Vertex::from_path(vec![1, 0, 1], 2).unwrap();
        assert!(root.is_strict_ancestor_of(&v));
        assert!(v.is_strict_ancestor_of(&w));
        assert!(!w.is_strict_ancestor_of(&v));
        assert!(!v.is_strict_ancestor_of(&v));
    }

    #[test]
    fn store_is_bounded() {
        let mut t: LazyTree<()> = LazyTree::new(2, 2);
        t.neighbour_or_insert(VertexId::ROOT, 0).unwrap();
        assert_eq!(
            t.neighbour_or_insert(VertexId::ROOT, 1),
            Err(Error::VertexStoreFull(2))
        );
    }
}

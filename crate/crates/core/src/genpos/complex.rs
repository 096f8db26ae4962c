use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DVector;

use super::GenposError;
use crate::scalar::Real;

pub type VertexId = u64;

/// A sorted set of vertex ids.
pub type Simplex = Vec<VertexId>;

/// A finite simplicial complex `K` with marked subcomplexes and a
/// piecewise-linear map into `R^m` given by vertex images.
///
/// Simplex lists are stored sorted, closed under faces, and ordered by
/// dimension then lexicographically. Marked subcomplexes are pairwise vertex
/// disjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct PLMapSpec<T: Real> {
    vertices: Vec<VertexId>,
    simplices: Vec<Simplex>,
    marked: Vec<Vec<Simplex>>,
    images: Vec<DVector<T>>,
    ambient_dim: usize,
}

impl<T: Real> PLMapSpec<T> {
    /// Validates the data and closes `simplices` and every marked list under
    /// faces. Each vertex is a simplex of `K`.
    pub fn new(
        vertices: Vec<VertexId>,
        simplices: Vec<Simplex>,
        marked: Vec<Vec<Simplex>>,
        images: Vec<DVector<T>>,
    ) -> Result<Self, GenposError> {
        let invalid = |msg: String| Err(GenposError::InvalidComplex(msg));
        if vertices.is_empty() {
            return invalid("the complex has no vertices".into());
        }
        if images.len() != vertices.len() {
            return invalid(format!("{} images for {} vertices", images.len(), vertices.len()));
        }
        let ambient_dim = images[0].len();
        if ambient_dim == 0 {
            return invalid("images must have positive dimension".into());
        }
        if images.iter().any(|p| p.len() != ambient_dim) {
            return invalid("images have inconsistent dimensions".into());
        }
        if images.iter().any(|p| p.iter().any(|x| !x.is_finite())) {
            return invalid("non-finite image coordinate".into());
        }
        let known: BTreeSet<VertexId> = vertices.iter().copied().collect();
        if known.len() != vertices.len() {
            return invalid("duplicate vertex id".into());
        }

        let normalize = |s: &Simplex| -> Result<Simplex, GenposError> {
            let set: BTreeSet<VertexId> = s.iter().copied().collect();
            if set.is_empty() || set.len() != s.len() {
                return Err(GenposError::InvalidComplex(format!("simplex {s:?} is empty or repeats a vertex")));
            }
            if let Some(v) = set.iter().find(|v| !known.contains(v)) {
                return Err(GenposError::InvalidComplex(format!("simplex {s:?} uses unknown vertex {v}")));
            }
            Ok(set.into_iter().collect())
        };

        let mut all = BTreeSet::new();
        for v in &vertices {
            all.insert(vec![*v]);
        }
        for s in &simplices {
            add_with_faces(&normalize(s)?, &mut all);
        }
        let mut closed_marked = Vec::with_capacity(marked.len());
        for (i, sub) in marked.iter().enumerate() {
            let mut set = BTreeSet::new();
            for s in sub {
                let s = normalize(s)?;
                if !all.contains(&s) {
                    return invalid(format!("marked simplex {s:?} of subcomplex {i} is not in the complex"));
                }
                add_with_faces(&s, &mut set);
            }
            if set.is_empty() {
                return invalid(format!("marked subcomplex {i} is empty"));
            }
            closed_marked.push(sort_simplices(set));
        }
        for i in 0..closed_marked.len() {
            let vi = vertex_set(&closed_marked[i]);
            for j in (i + 1)..closed_marked.len() {
                if vertex_set(&closed_marked[j]).intersection(&vi).next().is_some() {
                    return invalid(format!("marked subcomplexes {i} and {j} share a vertex"));
                }
            }
        }
        let mut order: Vec<usize> = (0..vertices.len()).collect();
        order.sort_by_key(|&k| vertices[k]);
        Ok(Self {
            vertices: order.iter().map(|&k| vertices[k]).collect(),
            images: order.iter().map(|&k| images[k].clone()).collect(),
            simplices: sort_simplices(all),
            marked: closed_marked,
            ambient_dim,
        })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn marked(&self) -> &[Vec<Simplex>] {
        &self.marked
    }

    pub fn images(&self) -> &[DVector<T>] {
        &self.images
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Position of `id` in [`Self::vertices`].
    pub fn index_of(&self, id: VertexId) -> Option<usize> {
        self.vertices.binary_search(&id).ok()
    }

    pub fn image(&self, id: VertexId) -> &DVector<T> {
        &self.images[self.index_of(id).expect("vertex of this complex")]
    }

    /// Vertex indices of a simplex.
    pub fn indices(&self, s: &Simplex) -> Vec<usize> {
        s.iter().map(|&v| self.index_of(v).expect("vertex of this complex")).collect()
    }

    pub fn dim(&self) -> usize {
        self.simplices.iter().map(|s| s.len() - 1).max().unwrap_or(0)
    }

    /// Combinatorial dimension of marked subcomplex `i`.
    pub fn marked_dim(&self, i: usize) -> usize {
        self.marked[i].iter().map(|s| s.len() - 1).max().unwrap_or(0)
    }

    /// Simplices of marked subcomplex `i` that are not a face of another.
    pub fn marked_top_simplices(&self, i: usize) -> Vec<Simplex> {
        top_simplices(&self.marked[i])
    }

    /// Same complex with new vertex images.
    pub fn with_images(&self, images: Vec<DVector<T>>) -> Result<Self, GenposError> {
        if images.len() != self.images.len() || images.iter().any(|p| p.len() != self.ambient_dim) {
            return Err(GenposError::InvalidComplex("replacement images do not match the complex".into()));
        }
        Ok(Self { images, ..self.clone() })
    }

    /// Largest distance between two vertex images of a simplex.
    pub fn image_diameter(&self, s: &Simplex) -> T {
        let pts: Vec<&DVector<T>> = s.iter().map(|&v| self.image(v)).collect();
        let mut best = T::zero();
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                best = best.max((pts[i] - pts[j]).norm());
            }
        }
        best
    }

    pub fn max_image_diameter(&self) -> T {
        self.simplices.iter().fold(T::zero(), |acc, s| acc.max(self.image_diameter(s)))
    }
}

fn add_with_faces(s: &Simplex, out: &mut BTreeSet<Simplex>) {
    if !out.insert(s.clone()) || s.len() == 1 {
        return;
    }
    for skip in 0..s.len() {
        let face: Simplex = s.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v).collect();
        add_with_faces(&face, out);
    }
}

fn sort_simplices(set: BTreeSet<Simplex>) -> Vec<Simplex> {
    let mut v: Vec<Simplex> = set.into_iter().collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v
}

fn vertex_set(simplices: &[Simplex]) -> BTreeSet<VertexId> {
    simplices.iter().flatten().copied().collect()
}

fn is_face(a: &Simplex, b: &Simplex) -> bool {
    a.len() < b.len() && a.iter().all(|v| b.binary_search(v).is_ok())
}

pub(crate) fn top_simplices(simplices: &[Simplex]) -> Vec<Simplex> {
    simplices.iter().filter(|s| !simplices.iter().any(|t| is_face(s, t))).cloned().collect()
}

/// Standard barycentric subdivision.
///
/// The barycenter of a vertex keeps its id; barycenters of higher simplices
/// get fresh ids above the current maximum, in simplex order. New simplices
/// are the flags `σ0 < σ1 < ... < σk` of the old complex, and a marked
/// subcomplex becomes the flags whose top element it contains.
pub fn barycentric_subdivide<T: Real>(spec: &PLMapSpec<T>) -> PLMapSpec<T> {
    let mut next = spec.vertices.iter().copied().max().unwrap_or(0) + 1;
    let mut ids: BTreeMap<&Simplex, VertexId> = BTreeMap::new();
    let mut vertices = Vec::with_capacity(spec.simplices.len());
    let mut images = Vec::with_capacity(spec.simplices.len());
    for s in &spec.simplices {
        let id = if s.len() == 1 {
            s[0]
        } else {
            next += 1;
            next - 1
        };
        ids.insert(s, id);
        vertices.push(id);
        let mut c = DVector::zeros(spec.ambient_dim);
        for &v in s {
            c += spec.image(v);
        }
        images.push(c / T::from_usize_lossy(s.len()));
    }

    // Flags ending at each simplex, built from its codimension-one faces.
    let position: BTreeMap<&Simplex, usize> = spec.simplices.iter().enumerate().map(|(k, s)| (s, k)).collect();
    let mut flags: Vec<Vec<Vec<VertexId>>> = Vec::with_capacity(spec.simplices.len());
    for s in &spec.simplices {
        let top = ids[s];
        let mut here = vec![vec![top]];
        if s.len() > 1 {
            let mut seen = BTreeSet::new();
            for face in proper_faces(s) {
                for chain in &flags[position[&face]] {
                    let mut c = chain.clone();
                    c.push(top);
                    c.sort_unstable();
                    if seen.insert(c.clone()) {
                        here.push(c);
                    }
                }
            }
        }
        flags.push(here);
    }

    let simplices: Vec<Simplex> = flags.iter().flatten().cloned().collect();
    let marked: Vec<Vec<Simplex>> = spec
        .marked
        .iter()
        .map(|sub| sub.iter().flat_map(|s| flags[position[s]].iter().cloned()).collect())
        .collect();
    PLMapSpec::new(vertices, simplices, marked, images).expect("subdivision of a valid complex is valid")
}

fn proper_faces(s: &Simplex) -> Vec<Simplex> {
    let n = s.len();
    let mut out = Vec::new();
    for mask in 1..(1u64 << n) - 1 {
        out.push((0..n).filter(|&k| mask & (1 << k) != 0).map(|k| s[k]).collect());
    }
    out
}

/// Number of subdivision rounds allowed before giving up.
pub const SUBDIVISION_CAP: usize = 24;

/// Subdivision stops with an error once the complex has more simplices.
pub const SIMPLEX_CAP: usize = 200_000;

/// Margin used to enforce `diam < δ / 2` strictly.
pub const DIAMETER_MARGIN: f64 = 1e-12;

/// Repeats [`barycentric_subdivide`] until every simplex image has diameter
/// below `δ / 2 - 1e-12`. Returns the subdivided complex and the number of
/// rounds. Fails after [`SUBDIVISION_CAP`] rounds or once the complex exceeds
/// [`SIMPLEX_CAP`] simplices.
pub fn subdivide_until<T: Real>(spec: &PLMapSpec<T>, delta: T) -> Result<(PLMapSpec<T>, usize), GenposError> {
    if !(delta > T::zero()) || !delta.is_finite() {
        return Err(GenposError::InvalidParameter(format!("delta must be positive, got {}", delta.as_f64())));
    }
    let target = delta * T::lit(0.5) - T::lit(DIAMETER_MARGIN);
    let mut current = spec.clone();
    for round in 0..=SUBDIVISION_CAP {
        if current.max_image_diameter() < target {
            return Ok((current, round));
        }
        if round == SUBDIVISION_CAP || current.simplices.len() > SIMPLEX_CAP {
            return Err(GenposError::SubdivisionCap { rounds: round });
        }
        current = barycentric_subdivide(&current);
    }
    unreachable!("the loop returns on its last round")
}

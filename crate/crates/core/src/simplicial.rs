//! Abstract simplicial complexes with every face stored explicitly.
//!
//! The empty face is a simplex of every complex. `f_vector` and
//! `euler_characteristic` count nonempty faces only.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::ComplexFile;
use crate::poset::Poset;

type Face = Vec<u32>;

/// A finite abstract simplicial complex on string-labelled vertices.
///
/// Vertices are kept sorted by label and faces are sorted index lists, so
/// structural equality (`==`) is equality of labelled set families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ComplexFile", try_from = "ComplexFile")]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    faces: BTreeSet<Face>,
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    small.iter().all(|v| big.binary_search(v).is_ok())
}

fn drop_one(f: &[u32], skip: usize) -> Face {
    f.iter()
        .enumerate()
        .filter(|&(k, _)| k != skip)
        .map(|(_, &v)| v)
        .collect()
}

fn union(a: &[u32], b: &[u32]) -> Face {
    let mut u: Face = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

impl SimplicialComplex {
    /// Canonicalises a complex given in an arbitrary vertex numbering.
    /// Vertices that occur in no face are dropped.
    pub(crate) fn canonical(
        labels: Vec<String>,
        faces: impl IntoIterator<Item = Vec<usize>>,
    ) -> Self {
        let faces: Vec<Vec<usize>> = faces.into_iter().collect();
        let mut used = vec![false; labels.len()];
        for f in &faces {
            for &v in f {
                used[v] = true;
            }
        }
        let mut order: Vec<usize> = (0..labels.len()).filter(|&v| used[v]).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        let mut renumber = vec![u32::MAX; labels.len()];
        for (new, &old) in order.iter().enumerate() {
            renumber[old] = new as u32;
        }
        let mut out = BTreeSet::new();
        out.insert(Vec::new());
        for f in faces {
            let mut g: Face = f.iter().map(|&v| renumber[v]).collect();
            g.sort_unstable();
            g.dedup();
            out.insert(g);
        }
        SimplicialComplex {
            vertices: order.into_iter().map(|v| labels[v].clone()).collect(),
            faces: out,
        }
    }

    /// The downward closure of `facets`. Every vertex must lie in some facet;
    /// use a singleton facet for an isolated vertex.
    pub fn from_facets<S: AsRef<str>, F: AsRef<[S]>>(vertices: &[S], facets: &[F]) -> Result<Self> {
        let labels: Vec<String> = vertices.iter().map(|v| v.as_ref().to_owned()).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.as_str(), i).is_some() {
                return Err(Error::InvalidComplex(format!("duplicate vertex `{l}`")));
            }
        }
        let mut faces: HashSet<Vec<usize>> = HashSet::new();
        faces.insert(Vec::new());
        for facet in facets {
            let mut f = facet
                .as_ref()
                .iter()
                .map(|v| {
                    index
                        .get(v.as_ref())
                        .copied()
                        .ok_or_else(|| Error::UnknownVertex(v.as_ref().to_owned()))
                })
                .collect::<Result<Vec<usize>>>()?;
            f.sort_unstable();
            f.dedup();
            if f.len() > 16 {
                return Err(Error::TooLarge(format!("facet with {} vertices", f.len())));
            }
            for mask in 1u32..(1 << f.len()) {
                let sub: Vec<usize> = (0..f.len())
                    .filter(|k| mask >> k & 1 == 1)
                    .map(|k| f[k])
                    .collect();
                faces.insert(sub);
            }
        }
        let mut used = vec![false; labels.len()];
        for f in &faces {
            for &v in f {
                used[v] = true;
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(Error::InvalidComplex(format!(
                "vertex `{}` is not a face",
                labels[v]
            )));
        }
        Ok(SimplicialComplex::canonical(labels, faces))
    }

    /// The complex `{∅}` with no vertices.
    pub fn void() -> Self {
        SimplicialComplex::canonical(Vec::new(), [])
    }

    /// Chains of `poset` (including the empty chain) on its elements.
    pub fn order_complex(poset: &Poset) -> Self {
        SimplicialComplex::canonical(poset.labels().to_vec(), poset.chains())
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    fn vertex_index(&self, label: &str) -> Result<u32> {
        self.vertices
            .binary_search_by(|v| v.as_str().cmp(label))
            .map(|i| i as u32)
            .map_err(|_| Error::UnknownVertex(label.to_owned()))
    }

    fn face_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Face> {
        let mut f = labels
            .iter()
            .map(|l| self.vertex_index(l.as_ref()))
            .collect::<Result<Face>>()?;
        f.sort_unstable();
        f.dedup();
        Ok(f)
    }

    fn labels_of(&self, f: &[u32]) -> Vec<String> {
        f.iter()
            .map(|&v| self.vertices[v as usize].clone())
            .collect()
    }

    pub fn has_vertex(&self, label: &str) -> bool {
        self.vertex_index(label).is_ok()
    }

    /// Number of simplices including the empty face.
    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// All simplices as sorted label lists, including the empty face.
    pub fn faces(&self) -> impl Iterator<Item = Vec<&str>> + '_ {
        self.faces.iter().map(|f| {
            f.iter()
                .map(|&v| self.vertices[v as usize].as_str())
                .collect()
        })
    }

    pub fn contains<S: AsRef<str>>(&self, face: &[S]) -> bool {
        self.face_of(face)
            .map(|f| self.faces.contains(&f))
            .unwrap_or(false)
    }

    /// Maximal faces, each as a sorted label list; sorted.
    pub fn facets(&self) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = self
            .facet_faces()
            .into_iter()
            .map(|f| self.labels_of(f))
            .collect();
        out.sort();
        out
    }

    fn facet_faces(&self) -> Vec<&Face> {
        // A face is maximal iff it is not a face minus one vertex.
        let mut covered: HashSet<Face> = HashSet::new();
        for f in &self.faces {
            for skip in 0..f.len() {
                covered.insert(drop_one(f, skip));
            }
        }
        self.faces
            .iter()
            .filter(|f| !covered.contains(*f))
            .collect()
    }

    /// Largest face size minus one; -1 for `{∅}`.
    pub fn dimension(&self) -> isize {
        self.faces.iter().map(|f| f.len()).max().unwrap_or(0) as isize - 1
    }

    /// `f_vector()[i]` counts faces with `i + 1` vertices. The empty face is
    /// not counted.
    pub fn f_vector(&self) -> Vec<usize> {
        let dim = self.dimension();
        let mut f = vec![0usize; (dim + 1).max(0) as usize];
        for face in &self.faces {
            if !face.is_empty() {
                f[face.len() - 1] += 1;
            }
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    pub fn is_pure(&self) -> bool {
        let facets = self.facet_faces();
        facets.windows(2).all(|w| w[0].len() == w[1].len())
    }

    /// Pure of dimension `d >= 0`, every `(d-1)`-face in exactly two facets,
    /// and the facets connected through shared `(d-1)`-faces.
    pub fn is_pseudomanifold(&self) -> bool {
        if self.dimension() < 0 || !self.is_pure() {
            return false;
        }
        let facets = self.facet_faces();
        let mut ridges: HashMap<Face, Vec<usize>> = HashMap::new();
        for (id, f) in facets.iter().enumerate() {
            for skip in 0..f.len() {
                ridges.entry(drop_one(f, skip)).or_default().push(id);
            }
        }
        if ridges.values().any(|ids| ids.len() != 2) {
            return false;
        }
        let mut parent: Vec<usize> = (0..facets.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for ids in ridges.values() {
            let (a, b) = (find(&mut parent, ids[0]), find(&mut parent, ids[1]));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..facets.len()).all(|f| find(&mut parent, f) == root)
    }

    /// Subcomplex on the vertex set `vertices` consisting of all faces
    /// contained in it.
    pub fn induced_subcomplex<S: AsRef<str>>(&self, vertices: &[S]) -> Result<Self> {
        let keep = self.face_of(vertices)?;
        let faces = self
            .faces
            .iter()
            .filter(|f| is_subset(f, &keep))
            .map(|f| f.iter().map(|&v| v as usize).collect());
        Ok(SimplicialComplex::canonical(self.vertices.clone(), faces))
    }

    /// Stellar subdivision at the nonempty face `sigma` with new vertex
    /// `new_vertex`:
    /// `{τ : τ ⊉ σ} ∪ {τ ∪ {v} : τ ⊉ σ, τ ∪ σ a face}`.
    ///
    /// Subdividing at a single vertex removes that vertex from the vertex
    /// set, since no face contains it afterwards.
    pub fn stellar_subdivision<S: AsRef<str>>(
        &self,
        sigma: &[S],
        new_vertex: &str,
    ) -> Result<Self> {
        let sigma_face = self.face_of(sigma)?;
        if sigma_face.is_empty() {
            return Err(Error::Precondition(
                "cannot subdivide at the empty face".into(),
            ));
        }
        if !self.faces.contains(&sigma_face) {
            return Err(Error::NotAFace(self.labels_of(&sigma_face)));
        }
        if self.has_vertex(new_vertex) {
            return Err(Error::VertexCollision(new_vertex.to_owned()));
        }
        let apex = self.vertices.len();
        let mut faces = Vec::new();
        for tau in &self.faces {
            if is_subset(&sigma_face, tau) {
                continue;
            }
            let as_usize: Vec<usize> = tau.iter().map(|&v| v as usize).collect();
            if self.faces.contains(&union(tau, &sigma_face)) {
                let mut with_apex = as_usize.clone();
                with_apex.push(apex);
                faces.push(with_apex);
            }
            faces.push(as_usize);
        }
        let mut labels = self.vertices.clone();
        labels.push(new_vertex.to_owned());
        Ok(SimplicialComplex::canonical(labels, faces))
    }

    /// `self ∪ {τ ∪ {apex} : τ ∈ sub}` for a subcomplex `sub`.
    pub fn cone(&self, sub: &SimplicialComplex, apex: &str) -> Result<Self> {
        if !sub.is_subcomplex_of(self) {
            return Err(Error::InvalidComplex(
                "cone base is not a subcomplex".into(),
            ));
        }
        if self.has_vertex(apex) {
            return Err(Error::VertexCollision(apex.to_owned()));
        }
        let apex_index = self.vertices.len();
        let mut faces: Vec<Vec<usize>> = self
            .faces
            .iter()
            .map(|f| f.iter().map(|&v| v as usize).collect())
            .collect();
        for tau in &sub.faces {
            let mut f: Vec<usize> = tau
                .iter()
                .map(|&v| {
                    self.vertex_index(&sub.vertices[v as usize])
                        .expect("subcomplex vertex") as usize
                })
                .collect();
            f.push(apex_index);
            faces.push(f);
        }
        let mut labels = self.vertices.clone();
        labels.push(apex.to_owned());
        Ok(SimplicialComplex::canonical(labels, faces))
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        let Ok(map) = self
            .vertices
            .iter()
            .map(|v| other.vertex_index(v))
            .collect::<Result<Vec<u32>>>()
        else {
            return false;
        };
        self.faces.iter().all(|f| {
            let mut g: Face = f.iter().map(|&v| map[v as usize]).collect();
            g.sort_unstable();
            other.faces.contains(&g)
        })
    }

    /// Renames vertices through a bijection. Every vertex must be mapped
    /// and images must be distinct.
    pub fn relabel(&self, map: &BTreeMap<String, String>) -> Result<Self> {
        let mut labels = Vec::with_capacity(self.vertices.len());
        let mut seen = HashSet::new();
        for v in &self.vertices {
            let image = map.get(v).ok_or_else(|| Error::UnknownVertex(v.clone()))?;
            if !seen.insert(image.as_str()) {
                return Err(Error::VertexCollision(image.clone()));
            }
            labels.push(image.clone());
        }
        let faces = self
            .faces
            .iter()
            .map(|f| f.iter().map(|&v| v as usize).collect());
        Ok(SimplicialComplex::canonical(labels, faces))
    }

    /// Labelled equality: identical vertex sets and simplex families.
    pub fn equals_labelled(&self, other: &SimplicialComplex) -> bool {
        self == other
    }

    /// Equality after renaming the vertices of `self` through `map`.
    pub fn equals_under_map(
        &self,
        other: &SimplicialComplex,
        map: &BTreeMap<String, String>,
    ) -> Result<bool> {
        Ok(self.relabel(map)? == *other)
    }

    /// Edges of the 1-skeleton as sorted label pairs.
    pub fn edges(&self) -> Vec<(String, String)> {
        self.faces
            .iter()
            .filter(|f| f.len() == 2)
            .map(|f| {
                (
                    self.vertices[f[0] as usize].clone(),
                    self.vertices[f[1] as usize].clone(),
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(vertices: &[&str], facets: &[&[&str]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(vertices, facets).unwrap()
    }

    fn triangle() -> SimplicialComplex {
        cx(&["a", "b", "c"], &[&["a", "b", "c"]])
    }

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    #[test]
    fn from_facets_closes_downward() {
        let e = cx(&["x", "y"], &[&["x", "y"]]);
        assert_eq!(e.num_faces(), 4);
        assert!(e.contains::<&str>(&[]));
        let path = cx(&["a", "b", "c"], &[&["a", "b"], &["b", "c"]]);
        assert_eq!(path.num_faces() - 1, 5);
    }

    #[test]
    fn unused_vertex_rejected() {
        assert!(matches!(
            SimplicialComplex::from_facets::<&str, &[&str]>(&["x"], &[]),
            Err(Error::InvalidComplex(_))
        ));
        assert!(SimplicialComplex::from_facets(&["x"], &[&["x"]]).is_ok());
        assert!(matches!(
            SimplicialComplex::from_facets(&["x"], &[&["q"]]),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn induced() {
        let edge = triangle().induced_subcomplex(&["a", "b"]).unwrap();
        assert_eq!(edge, cx(&["a", "b"], &[&["a", "b"]]));
        let path = cx(&["a", "b", "c"], &[&["a", "b"], &["b", "c"]]);
        let two = path.induced_subcomplex(&["a", "c"]).unwrap();
        assert_eq!(two, cx(&["a", "c"], &[&["a"], &["c"]]));
        assert_eq!(
            path.induced_subcomplex::<&str>(&[]).unwrap(),
            SimplicialComplex::void()
        );
    }

    #[test]
    fn subdivide_edge() {
        let e = cx(&["a", "b"], &[&["a", "b"]]);
        let sd = e.stellar_subdivision(&["a", "b"], "v").unwrap();
        assert_eq!(sd, cx(&["a", "b", "v"], &[&["a", "v"], &["v", "b"]]));
    }

    #[test]
    fn subdivide_triangle_edge() {
        // Faces by hand from the subdivision formula: τ ⊉ {a,b} gives the
        // triangle's faces minus {a,b} and {a,b,c}; adding v to those τ with
        // τ ∪ {a,b} a face gives {v},{a,v},{b,v},{c,v},{a,c,v},{b,c,v}.
        let sd = triangle().stellar_subdivision(&["a", "b"], "v").unwrap();
        let expected = cx(&["a", "b", "c", "v"], &[&["a", "c", "v"], &["b", "c", "v"]]);
        assert_eq!(sd, expected);
        assert_eq!(sd.f_vector(), vec![4, 5, 2]);
        assert_eq!(sd.euler_characteristic(), 1);
        assert_eq!(triangle().euler_characteristic(), 1);
    }

    #[test]
    fn subdivide_at_vertex_is_relabelling() {
        let sd = triangle().stellar_subdivision(&["a"], "v").unwrap();
        assert!(!sd.has_vertex("a"));
        let renamed = triangle()
            .equals_under_map(&sd, &map(&[("a", "v"), ("b", "b"), ("c", "c")]))
            .unwrap();
        assert!(renamed);
    }

    #[test]
    fn subdivision_errors() {
        let path = cx(&["a", "b", "c"], &[&["a", "b"], &["b", "c"]]);
        assert!(matches!(
            path.stellar_subdivision(&["a", "c"], "v"),
            Err(Error::NotAFace(_))
        ));
        assert!(matches!(
            path.stellar_subdivision(&["a", "b"], "c"),
            Err(Error::VertexCollision(_))
        ));
        assert!(matches!(
            path.stellar_subdivision::<&str>(&[], "v"),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn cones() {
        let x = cx(&["x"], &[&["x"]]);
        assert_eq!(x.cone(&x, "a").unwrap(), cx(&["x", "a"], &[&["x", "a"]]));

        let k = cx(&["a", "b", "c"], &[&["a", "c"], &["b", "c"]]);
        let sub = k.induced_subcomplex(&["a", "b"]).unwrap();
        let square = k.cone(&sub, "d").unwrap();
        assert_eq!(
            square,
            cx(
                &["a", "b", "c", "d"],
                &[&["a", "c"], &["b", "c"], &["a", "d"], &["b", "d"]]
            )
        );
        assert!(square.is_pseudomanifold());

        let plus_point = k.cone(&SimplicialComplex::void(), "q").unwrap();
        assert_eq!(
            plus_point,
            cx(&["a", "b", "c", "q"], &[&["a", "c"], &["b", "c"], &["q"]])
        );
        assert!(matches!(k.cone(&k, "a"), Err(Error::VertexCollision(_))));
        assert!(matches!(
            k.cone(&triangle(), "z"),
            Err(Error::InvalidComplex(_))
        ));
    }

    #[test]
    fn order_complexes() {
        let c3 = Poset::chain(&["z", "m", "t"]).unwrap();
        assert_eq!(
            SimplicialComplex::order_complex(&c3),
            cx(&["z", "m", "t"], &[&["z", "m", "t"]])
        );
        let anti = Poset::antichain(&["p", "q", "r"]).unwrap();
        assert_eq!(
            SimplicialComplex::order_complex(&anti),
            cx(&["p", "q", "r"], &[&["p"], &["q"], &["r"]])
        );
    }

    #[test]
    fn diagnostics() {
        let t = triangle();
        assert_eq!(t.f_vector(), vec![3, 3, 1]);
        assert_eq!(t.euler_characteristic(), 1);
        assert!(t.is_pure());
        assert!(!t.is_pseudomanifold());

        let sq = cx(
            &["a", "b", "c", "d"],
            &[&["a", "b"], &["b", "c"], &["c", "d"], &["d", "a"]],
        );
        assert_eq!(sq.euler_characteristic(), 0);
        assert!(sq.is_pure() && sq.is_pseudomanifold());

        let s0 = cx(&["p", "q"], &[&["p"], &["q"]]);
        assert_eq!(s0.euler_characteristic(), 2);
        assert!(s0.is_pseudomanifold());

        // Two disjoint squares: every ridge in two facets but disconnected.
        let two = cx(
            &["a", "b", "c", "d", "e", "f", "g", "h"],
            &[
                &["a", "b"],
                &["b", "c"],
                &["c", "d"],
                &["d", "a"],
                &["e", "f"],
                &["f", "g"],
                &["g", "h"],
                &["h", "e"],
            ],
        );
        assert!(!two.is_pseudomanifold());

        let mixed = cx(&["a", "b", "c"], &[&["a", "b"], &["c"]]);
        assert!(!mixed.is_pure());
        assert_eq!(SimplicialComplex::void().dimension(), -1);
        assert!(SimplicialComplex::void().f_vector().is_empty());
    }

    #[test]
    fn equality() {
        let p1 = cx(&["a", "v", "b"], &[&["a", "v"], &["v", "b"]]);
        let p2 = cx(&["a", "w", "b"], &[&["a", "w"], &["w", "b"]]);
        assert!(p1.equals_labelled(&p1.clone()));
        assert!(!p1.equals_labelled(&p2));
        assert!(p1
            .equals_under_map(&p2, &map(&[("a", "a"), ("v", "w"), ("b", "b")]))
            .unwrap());
        let edge = cx(&["a", "b"], &[&["a", "b"]]);
        assert!(!edge.equals_labelled(&p1));
        assert!(matches!(
            p1.relabel(&map(&[("a", "x"), ("v", "x"), ("b", "y")])),
            Err(Error::VertexCollision(_))
        ));
    }

    #[test]
    fn facets_sorted() {
        let k = cx(&["c", "a", "b"], &[&["b", "c"], &["a", "b"]]);
        assert_eq!(
            k.facets(),
            vec![
                vec!["a".to_string(), "b".into()],
                vec!["b".into(), "c".into()]
            ]
        );
        assert_eq!(k.vertices(), &["a", "b", "c"]);
    }
}

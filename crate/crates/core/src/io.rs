//! JSON interchange formats and Graphviz export.
//!
//! ```json
//! {"elements": ["z", "a"], "covers": [["z", "a"]]}          // poset
//! {"members": ["z"]}                                        // ideal
//! {"vertices": ["a", "b"], "facets": [["a", "b"]]}          // complex
//! {"poset": {...}, "members": ["a", "b"]}                   // building set
//! ```
//!
//! Emitted lists are sorted, and [`to_canonical_json`] sorts object keys, so
//! output is byte-stable.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nested::BuildingSet;
use crate::poset::{Ideal, Poset};
use crate::simplicial::SimplicialComplex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetFile {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealFile {
    pub members: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub vertices: Vec<String>,
    pub facets: Vec<Vec<String>>,
}

/// A building set, optionally carrying its poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildingSetFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poset: Option<PosetFile>,
    pub members: Vec<String>,
}

impl From<Poset> for PosetFile {
    fn from(p: Poset) -> Self {
        PosetFile::from(&p)
    }
}

impl From<&Poset> for PosetFile {
    fn from(p: &Poset) -> Self {
        let mut covers: Vec<(String, String)> = p
            .covers()
            .into_iter()
            .map(|(a, b)| (p.label(a).to_owned(), p.label(b).to_owned()))
            .collect();
        covers.sort();
        PosetFile {
            elements: p.labels().to_vec(),
            covers,
        }
    }
}

impl TryFrom<PosetFile> for Poset {
    type Error = Error;

    fn try_from(f: PosetFile) -> Result<Self> {
        Poset::from_covers(&f.elements, &f.covers)
    }
}

impl From<SimplicialComplex> for ComplexFile {
    fn from(k: SimplicialComplex) -> Self {
        ComplexFile::from(&k)
    }
}

impl From<&SimplicialComplex> for ComplexFile {
    fn from(k: &SimplicialComplex) -> Self {
        ComplexFile {
            vertices: k.vertices().to_vec(),
            facets: k.facets(),
        }
    }
}

impl TryFrom<ComplexFile> for SimplicialComplex {
    type Error = Error;

    fn try_from(f: ComplexFile) -> Result<Self> {
        SimplicialComplex::from_facets(&f.vertices, &f.facets)
    }
}

impl From<&BuildingSet> for BuildingSetFile {
    fn from(g: &BuildingSet) -> Self {
        let mut members = g.poset().labels_of(g.members());
        members.sort();
        BuildingSetFile {
            poset: Some(PosetFile::from(g.poset())),
            members,
        }
    }
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_poset(text: &str) -> Result<Poset> {
    parse_json::<PosetFile>(text)?.try_into()
}

pub fn parse_ideal(poset: &Poset, text: &str) -> Result<Ideal> {
    let f: IdealFile = parse_json(text)?;
    Ideal::from_labels(poset, &f.members)
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    parse_json::<ComplexFile>(text)?.try_into()
}

/// Parses a building-set file. `poset` overrides an embedded poset; one of
/// the two must be present. Returns the poset and member indices, without
/// validating the building-set property.
pub fn parse_building_members(poset: Option<&Poset>, text: &str) -> Result<(Poset, Vec<usize>)> {
    let f: BuildingSetFile = parse_json(text)?;
    let poset = match (poset, f.poset) {
        (Some(p), _) => p.clone(),
        (None, Some(pf)) => pf.try_into()?,
        (None, None) => {
            return Err(Error::Parse(
                "building set needs an embedded poset or a separate poset file".into(),
            ))
        }
    };
    let members = poset.indices_of(&f.members)?;
    Ok((poset, members))
}

/// Parses and validates a building set.
pub fn parse_building_set(poset: Option<&Poset>, text: &str) -> Result<BuildingSet> {
    let (p, members) = parse_building_members(poset, text)?;
    BuildingSet::new(&p, &members)
}

/// Serialises with object keys sorted.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report types serialise to JSON");
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values print");
    s.push('\n');
    s
}

fn quote(label: &str) -> String {
    let mut s = String::with_capacity(label.len() + 2);
    s.push('"');
    for c in label.chars() {
        match c {
            '"' => s.push_str("\\\""),
            '\\' => s.push_str("\\\\"),
            '\n' => s.push_str("\\n"),
            c => s.push(c),
        }
    }
    s.push('"');
    s
}

/// Hasse diagram drawn bottom-up, one rank per element height.
pub fn hasse_to_dot(p: &Poset) -> String {
    let heights = p.heights();
    let mut by_rank: Vec<Vec<&str>> = vec![Vec::new(); heights.iter().max().map_or(0, |h| h + 1)];
    for (i, &h) in heights.iter().enumerate() {
        by_rank[h].push(p.label(i));
    }
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for rank in &mut by_rank {
        rank.sort_unstable();
        let names: Vec<String> = rank.iter().map(|l| quote(l)).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", names.join("; "));
    }
    for (a, b) in PosetFile::from(p).covers {
        let _ = writeln!(out, "  {} -> {};", quote(&a), quote(&b));
    }
    out.push_str("}\n");
    out
}

/// The 1-skeleton as an undirected graph.
pub fn complex_to_dot(k: &SimplicialComplex) -> String {
    let mut out = String::from("graph complex {\n");
    for v in k.vertices() {
        let _ = writeln!(out, "  {};", quote(v));
    }
    for (a, b) in k.edges() {
        let _ = writeln!(out, "  {} -- {};", quote(&a), quote(&b));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_round_trip() {
        let text = r#"{"elements": ["z","a","b","t"], "covers": [["z","a"],["z","b"],["a","t"],["b","t"]]}"#;
        let p = parse_poset(text).unwrap();
        let again = parse_poset(&to_canonical_json(&p)).unwrap();
        assert_eq!(p, again);
        assert_eq!(serde_json::from_str::<Poset>(text).unwrap(), p);
    }

    #[test]
    fn transitive_covers_are_reduced() {
        let p =
            parse_poset(r#"{"elements":["a","b","c"],"covers":[["a","b"],["b","c"],["a","c"]]}"#)
                .unwrap();
        assert_eq!(PosetFile::from(&p).covers.len(), 2);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_poset("{"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_poset(r#"{"elements":["x","y"],"covers":[["x","y"],["y","x"]]}"#),
            Err(Error::Cycle(_))
        ));
        assert!(matches!(
            parse_poset(r#"{"elements":["x"],"bogus":1}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_complex(r#"{"vertices":["a"],"facets":[["b"]]}"#),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn ideal_and_building_files() {
        let b3 = Poset::boolean_lattice(3).unwrap();
        let i = parse_ideal(&b3, r#"{"members":["{}","{1}"]}"#).unwrap();
        assert_eq!(i.len(), 2);
        assert!(parse_ideal(&b3, r#"{"members":["{1}"]}"#).is_err());

        let text = r#"{"poset":{"elements":["z","a","b","t"],"covers":[["z","a"],["z","b"],["a","t"],["b","t"]]},"members":["a","b"]}"#;
        let g = parse_building_set(None, text).unwrap();
        assert_eq!(g.members().len(), 2);
        let back = to_canonical_json(&BuildingSetFile::from(&g));
        assert_eq!(
            parse_building_set(None, &back).unwrap().members(),
            g.members()
        );
        assert!(matches!(
            parse_building_set(None, r#"{"members":["a"]}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn complex_round_trip_and_dot() {
        let k = parse_complex(r#"{"vertices":["b","a","c"],"facets":[["a","b"],["c"]]}"#).unwrap();
        let json = to_canonical_json(&k);
        assert_eq!(parse_complex(&json).unwrap(), k);
        assert_eq!(
            json,
            "{\n  \"facets\": [\n    [\n      \"a\",\n      \"b\"\n    ],\n    [\n      \"c\"\n    ]\n  ],\n  \"vertices\": [\n    \"a\",\n    \"b\",\n    \"c\"\n  ]\n}\n"
        );
        assert_eq!(
            complex_to_dot(&k),
            "graph complex {\n  \"a\";\n  \"b\";\n  \"c\";\n  \"a\" -- \"b\";\n}\n"
        );
    }

    #[test]
    fn hasse_dot_layers() {
        let p = Poset::from_covers(&["z", "b", "a"], &[("z", "a"), ("z", "b")]).unwrap();
        assert_eq!(
            hasse_to_dot(&p),
            "digraph hasse {\n  rankdir=BT;\n  node [shape=plaintext];\n  { rank=same; \"z\"; }\n  { rank=same; \"a\"; \"b\"; }\n  \"z\" -> \"a\";\n  \"z\" -> \"b\";\n}\n"
        );
        assert_eq!(quote("a\"b"), "\"a\\\"b\"");
    }
}

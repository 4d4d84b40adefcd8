//! JSON complex description and the validating builder.
//!
//! ```json
//! {
//!   "layers": [
//!     {"id": 1, "nodes": [1, 2], "edges": [[1, 2]], "cells2": []},
//!     {"id": 2, "nodes": [1]}
//!   ],
//!   "cross": [
//!     {"pair": [1, 2],
//!      "edges": [[1, 1], [2, 1]],
//!      "cells2": [{"class": [1, 0],
//!                  "faces": ["L1/k1/0", "X1-2/c0,0/1", "-X1-2/c0,0/0"]}]}
//!   ]
//! }
//! ```
//!
//! Intra edges are `[node, node]` label pairs and are oriented from the lower
//! to the higher node index (position in `nodes`). Cross-edges are
//! `[lower-layer node, upper-layer node]` and point from the lower to the
//! upper layer. Higher cells list their faces by canonical id; a leading `-`
//! marks a face traversed against its own orientation.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::boundary::verify_chain;
use crate::complex::{
    CellClass, CellMultiComplex, CellRef, CrossCell, CrossComplex, IntraCell, Layer, LayerId,
    LayerPair, SignedFace,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDescription {
    #[serde(default)]
    pub layers: Vec<LayerDescription>,
    #[serde(default)]
    pub cross: Vec<CrossDescription>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerDescription {
    pub id: LayerId,
    #[serde(default)]
    pub nodes: Vec<u64>,
    #[serde(default)]
    pub edges: Vec<[u64; 2]>,
    /// Each 2-cell is a list of signed intra edge ids.
    #[serde(default)]
    pub cells2: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossDescription {
    pub pair: [LayerId; 2],
    #[serde(default)]
    pub edges: Vec<[u64; 2]>,
    #[serde(default)]
    pub cells2: Vec<CrossCellDescription>,
    #[serde(default)]
    pub cells3: Vec<CrossCellDescription>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossCellDescription {
    pub class: [i8; 2],
    pub faces: Vec<String>,
}

impl ComplexDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("description serializes")
    }
}

impl CellMultiComplex {
    /// Parses and builds a complex from its JSON description.
    pub fn from_json(text: &str) -> Result<Self> {
        build_complex(&ComplexDescription::from_json(text)?)
    }

    pub fn to_json(&self) -> String {
        self.to_description().to_json()
    }

    /// Description that rebuilds to an identical complex.
    pub fn to_description(&self) -> ComplexDescription {
        let layers = self
            .layers
            .iter()
            .map(|layer| LayerDescription {
                id: layer.id,
                nodes: layer.labels.clone(),
                edges: (0..layer.cells[1].len())
                    .map(|e| {
                        let (t, h) = layer.edge_endpoints(e);
                        [layer.labels[t], layer.labels[h]]
                    })
                    .collect(),
                cells2: layer.cells[2]
                    .iter()
                    .map(|c| face_strings(&c.boundary))
                    .collect(),
            })
            .collect();
        let cross = self
            .cross
            .iter()
            .map(|cc| {
                let lower = self.layer(cc.pair.lower()).expect("lower layer");
                let upper = self.layer(cc.pair.upper()).expect("upper layer");
                let edges = (0..cc.cells(CellClass::CROSS_EDGE).len())
                    .map(|e| {
                        let (a, b) = cc.cross_edge_endpoints(e);
                        [lower.labels[a], upper.labels[b]]
                    })
                    .collect();
                let cells_of_order = |order| {
                    cc.classes
                        .iter()
                        .filter(|(class, _)| class.cross_order() == Some(order))
                        .flat_map(|(class, cells)| {
                            cells.iter().map(move |c| CrossCellDescription {
                                class: [class.k, class.n],
                                faces: face_strings(&c.boundary),
                            })
                        })
                        .collect()
                };
                CrossDescription {
                    pair: [cc.pair.lower(), cc.pair.upper()],
                    edges,
                    cells2: cells_of_order(2),
                    cells3: cells_of_order(3),
                }
            })
            .collect();
        ComplexDescription { layers, cross }
    }
}

fn face_strings(boundary: &[SignedFace]) -> Vec<String> {
    boundary
        .iter()
        .map(|f| {
            if f.sign < 0 {
                format!("-{}", f.cell)
            } else {
                f.cell.to_string()
            }
        })
        .collect()
}

fn parse_signed(face: &str) -> Result<SignedFace> {
    let (sign, id) = match face.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, face.strip_prefix('+').unwrap_or(face)),
    };
    Ok(SignedFace::new(id.parse()?, sign))
}

/// Builds and validates a complex from a parsed description.
pub fn build_complex(desc: &ComplexDescription) -> Result<CellMultiComplex> {
    let mut layer_descs: Vec<&LayerDescription> = desc.layers.iter().collect();
    layer_descs.sort_by_key(|l| l.id);
    for w in layer_descs.windows(2) {
        if w[0].id == w[1].id {
            return Err(Error::DuplicateCell {
                cell: format!("L{}", w[0].id),
            });
        }
    }

    let mut complex = CellMultiComplex::empty();
    for ld in layer_descs {
        let layer = build_layer(ld)?;
        complex.layers.push(layer);
    }

    let mut cross_descs: Vec<(LayerPair, &CrossDescription)> = Vec::new();
    for cd in &desc.cross {
        let pair = LayerPair::new(cd.pair[0], cd.pair[1])?;
        for id in [pair.lower(), pair.upper()] {
            if complex.layer(id).is_none() {
                return Err(Error::UnknownLayer(id));
            }
        }
        cross_descs.push((pair, cd));
    }
    cross_descs.sort_by_key(|(p, _)| *p);
    for w in cross_descs.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::DuplicateCell {
                cell: format!("X{}", w[0].0),
            });
        }
    }
    for (pair, cd) in cross_descs {
        let cc = build_cross(&complex, pair, cd)?;
        complex.cross.push(cc);
    }

    let report = verify_chain(&complex);
    if let Some(bad) = report.checks.iter().find(|c| !c.passed) {
        return Err(Error::ChainViolation {
            at: bad.label.clone(),
        });
    }
    Ok(complex)
}

fn build_layer(ld: &LayerDescription) -> Result<Layer> {
    let id = ld.id;
    let mut index_of: HashMap<u64, usize> = HashMap::new();
    let mut nodes = Vec::with_capacity(ld.nodes.len());
    for (i, &label) in ld.nodes.iter().enumerate() {
        let cell = CellRef::Intra {
            layer: id,
            order: 0,
            index: i,
        };
        if index_of.insert(label, i).is_some() {
            return Err(Error::DuplicateCell {
                cell: format!("{cell} (node {label})"),
            });
        }
        nodes.push(IntraCell {
            id: cell,
            boundary: Vec::new(),
        });
    }

    let node = |index| CellRef::Intra {
        layer: id,
        order: 0,
        index,
    };
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(ld.edges.len());
    for (i, &[a, b]) in ld.edges.iter().enumerate() {
        let cell = CellRef::Intra {
            layer: id,
            order: 1,
            index: i,
        };
        let lookup = |label: u64| {
            index_of
                .get(&label)
                .copied()
                .ok_or_else(|| Error::DanglingFace {
                    cell: cell.to_string(),
                    face: format!("node {label} of layer {id}"),
                })
        };
        let (ia, ib) = (lookup(a)?, lookup(b)?);
        if ia == ib {
            return Err(Error::SelfLoop {
                cell: cell.to_string(),
                node: a,
            });
        }
        let (tail, head) = (ia.min(ib), ia.max(ib));
        if !seen.insert((tail, head)) {
            return Err(Error::DuplicateCell {
                cell: format!("{cell} (edge {a}-{b})"),
            });
        }
        edges.push(IntraCell {
            id: cell,
            boundary: vec![
                SignedFace::new(node(tail), -1),
                SignedFace::new(node(head), 1),
            ],
        });
    }

    let mut layer = Layer {
        id,
        labels: ld.nodes.clone(),
        cells: [nodes, edges, Vec::new()],
    };

    let mut seen_cells: HashSet<Vec<usize>> = HashSet::new();
    for (i, faces) in ld.cells2.iter().enumerate() {
        let cell = CellRef::Intra {
            layer: id,
            order: 2,
            index: i,
        };
        let boundary = resolve_faces(&cell, faces, |f| match f {
            CellRef::Intra {
                layer: l,
                order: 1,
                index,
            } => *l == id && *index < layer.cells[1].len(),
            _ => false,
        })?;
        check_cycle(&cell, &boundary, |e| edge_faces_in_layer(&layer, e))?;
        let mut key: Vec<usize> = boundary.iter().map(|f| f.cell.index()).collect();
        key.sort_unstable();
        if !seen_cells.insert(key) {
            return Err(Error::DuplicateCell {
                cell: cell.to_string(),
            });
        }
        layer.cells[2].push(IntraCell { id: cell, boundary });
    }
    Ok(layer)
}

fn edge_faces_in_layer(layer: &Layer, edge: &CellRef) -> Vec<SignedFace> {
    layer.cells[1][edge.index()].boundary.clone()
}

/// Parses signed face ids, checking existence and uniqueness.
fn resolve_faces(
    cell: &CellRef,
    faces: &[String],
    exists: impl Fn(&CellRef) -> bool,
) -> Result<Vec<SignedFace>> {
    let mut out: Vec<SignedFace> = Vec::with_capacity(faces.len());
    for raw in faces {
        let face = parse_signed(raw)?;
        if !exists(&face.cell) {
            return Err(Error::DanglingFace {
                cell: cell.to_string(),
                face: face.cell.to_string(),
            });
        }
        if out.iter().any(|f| f.cell == face.cell) {
            return Err(Error::RepeatedFace {
                cell: cell.to_string(),
                face: face.cell.to_string(),
            });
        }
        out.push(face);
    }
    Ok(out)
}

/// Local chain property: the signed boundary of the signed faces cancels.
fn check_cycle(
    cell: &CellRef,
    boundary: &[SignedFace],
    faces_of: impl Fn(&CellRef) -> Vec<SignedFace>,
) -> Result<()> {
    let min_faces = if cell.order() == 2 { 3 } else { 2 };
    let mut sum: BTreeMap<CellRef, i64> = BTreeMap::new();
    for f in boundary {
        for sub in faces_of(&f.cell) {
            *sum.entry(sub.cell).or_default() += i64::from(f.sign) * i64::from(sub.sign);
        }
    }
    if boundary.len() < min_faces || sum.values().any(|&v| v != 0) {
        return Err(Error::ChainViolation {
            at: cell.to_string(),
        });
    }
    Ok(())
}

fn build_cross(
    complex: &CellMultiComplex,
    pair: LayerPair,
    cd: &CrossDescription,
) -> Result<CrossComplex> {
    let lower = complex.layer(pair.lower()).expect("checked");
    let upper = complex.layer(pair.upper()).expect("checked");
    let mut cc = CrossComplex {
        pair,
        classes: BTreeMap::new(),
    };

    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(cd.edges.len());
    for (i, &[a, b]) in cd.edges.iter().enumerate() {
        let cell = CellRef::Cross {
            pair,
            class: CellClass::CROSS_EDGE,
            index: i,
        };
        let dangling = |label: u64, layer: LayerId| Error::DanglingFace {
            cell: cell.to_string(),
            face: format!("node {label} of layer {layer}"),
        };
        let ia = lower.node_index(a).ok_or_else(|| dangling(a, lower.id))?;
        let ib = upper.node_index(b).ok_or_else(|| dangling(b, upper.id))?;
        if !seen.insert((ia, ib)) {
            return Err(Error::DuplicateCell {
                cell: format!("{cell} (cross-edge {a}-{b})"),
            });
        }
        edges.push(CrossCell {
            id: cell,
            boundary: vec![
                SignedFace::new(
                    CellRef::Intra {
                        layer: lower.id,
                        order: 0,
                        index: ia,
                    },
                    -1,
                ),
                SignedFace::new(
                    CellRef::Intra {
                        layer: upper.id,
                        order: 0,
                        index: ib,
                    },
                    1,
                ),
            ],
        });
    }
    cc.classes.insert(CellClass::CROSS_EDGE, edges);

    for (order, descs) in [(2u8, &cd.cells2), (3u8, &cd.cells3)] {
        let mut seen_cells: HashSet<(CellClass, Vec<CellRef>)> = HashSet::new();
        for (pos, desc) in descs.iter().enumerate() {
            let declared = CellClass::new(desc.class[0], desc.class[1]);
            let provisional = format!("X{pair}/cells{order}[{pos}]");
            if declared.cross_order() != Some(order) {
                return Err(Error::ClassMismatch {
                    cell: provisional,
                    declared: declared.to_string(),
                    derived: format!("a class of order {order}"),
                });
            }
            let index = cc.cells(declared).len();
            let cell = CellRef::Cross {
                pair,
                class: declared,
                index,
            };
            let boundary = {
                let view = PartialCross {
                    complex,
                    cross: &cc,
                };
                let boundary = resolve_faces(&cell, &desc.faces, |f| {
                    view.face_allowed(f, pair, order - 1)
                })?;
                check_cycle(&cell, &boundary, |f| view.boundary(f))?;
                let derived = view.derive_class(&boundary, pair);
                if derived != Some(declared) {
                    return Err(Error::ClassMismatch {
                        cell: cell.to_string(),
                        declared: declared.to_string(),
                        derived: derived.map_or("no cross faces".to_string(), |d| d.to_string()),
                    });
                }
                boundary
            };
            let mut key: Vec<CellRef> = boundary.iter().map(|f| f.cell).collect();
            key.sort_unstable();
            if !seen_cells.insert((declared, key)) {
                return Err(Error::DuplicateCell {
                    cell: cell.to_string(),
                });
            }
            cc.classes
                .entry(declared)
                .or_default()
                .push(CrossCell { id: cell, boundary });
        }
    }
    Ok(cc)
}

/// Lookup over the finished layers plus the cross complex under construction.
struct PartialCross<'a> {
    complex: &'a CellMultiComplex,
    cross: &'a CrossComplex,
}

impl PartialCross<'_> {
    fn boundary(&self, cell: &CellRef) -> Vec<SignedFace> {
        match cell {
            CellRef::Cross { class, index, .. } => {
                self.cross.cells(*class)[*index].boundary.clone()
            }
            intra => self
                .complex
                .boundary(intra)
                .map(|b| b.to_vec())
                .unwrap_or_default(),
        }
    }

    fn face_allowed(&self, face: &CellRef, pair: LayerPair, order: u8) -> bool {
        match *face {
            CellRef::Intra {
                layer, order: o, ..
            } => {
                o == order
                    && (layer == pair.lower() || layer == pair.upper())
                    && self.complex.contains(face)
            }
            CellRef::Cross {
                pair: p,
                class,
                index,
            } => {
                p == pair
                    && class.cross_order() == Some(order)
                    && index < self.cross.cells(class).len()
            }
        }
    }

    /// Highest face order touched on each layer, following the faces downwards.
    fn derive_class(&self, boundary: &[SignedFace], pair: LayerPair) -> Option<CellClass> {
        let mut k = -1i8;
        let mut n = -1i8;
        let mut has_cross = false;
        let mut stack: Vec<CellRef> = boundary.iter().map(|f| f.cell).collect();
        let mut visited = HashSet::new();
        while let Some(c) = stack.pop() {
            if !visited.insert(c) {
                continue;
            }
            match c {
                CellRef::Intra { layer, order, .. } => {
                    if layer == pair.lower() {
                        k = k.max(order as i8);
                    } else {
                        n = n.max(order as i8);
                    }
                }
                CellRef::Cross { .. } => has_cross = true,
            }
            stack.extend(self.boundary(&c).into_iter().map(|f| f.cell));
        }
        let class = CellClass::new(k, n);
        (has_cross && class.is_cross()).then_some(class)
    }
}

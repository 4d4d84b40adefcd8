//! Cones through an apex on one layer of a pair, and the ranking of
//! harmonic cross-hubs.

use std::collections::BTreeSet;

use petgraph::unionfind::UnionFind;

use crate::boundary::View;
use crate::cochain::Cochain;
use crate::complex::{CellClass, CellMultiComplex, CellRef, LayerId, LayerPair};
use crate::error::{Error, Result};
use crate::linalg::integer_rank;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConeKind {
    /// The endpoints are joined by a path in their own layer.
    Closed,
    /// The apex is the only link between the endpoints' clusters.
    Open,
}

/// Two cross-edges sharing an apex vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub apex: CellRef,
    pub endpoints: [CellRef; 2],
    pub legs: [CellRef; 2],
    pub kind: ConeKind,
    pub filled: bool,
}

/// Cone statistics of one apex of cross-degree at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApexSummary {
    pub apex: CellRef,
    pub degree: usize,
    /// Rank of the leg incidence of the filled cells at this apex.
    pub filled_rank: usize,
    /// `degree - 1 - filled_rank`.
    pub independent_unfilled: usize,
    pub unfilled_closed: usize,
    pub unfilled_open: usize,
}

impl ApexSummary {
    pub fn unfilled(&self) -> usize {
        self.unfilled_closed + self.unfilled_open
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConeInventory {
    pub cones: Vec<Cone>,
    pub apexes: Vec<ApexSummary>,
}

impl ConeInventory {
    /// Number of independent unfilled cones over all apexes.
    pub fn independent_unfilled(&self) -> usize {
        self.apexes.iter().map(|a| a.independent_unfilled).sum()
    }
}

/// The cross-edges of a pair, each as `(edge id, apex index, endpoint index)`.
struct Legs {
    view: View,
    apex_layer: LayerId,
    base_layer: LayerId,
    by_apex: Vec<Vec<(CellRef, usize)>>,
}

impl Legs {
    fn new(complex: &CellMultiComplex, pair: LayerPair, apex_layer: LayerId) -> Result<Self> {
        complex.check_pair(pair)?;
        let base_layer = if apex_layer == pair.upper() {
            pair.lower()
        } else if apex_layer == pair.lower() {
            pair.upper()
        } else {
            return Err(Error::UnknownLayer(apex_layer));
        };
        let view = View::of_layer(pair, base_layer).expect("layer of the pair");
        let apex_count = complex.layer(apex_layer).map_or(0, |l| l.node_count());
        let mut by_apex = vec![Vec::new(); apex_count];
        if let Some(cross) = complex.cross_complex(pair) {
            for (i, edge) in cross.cells(CellClass::CROSS_EDGE).iter().enumerate() {
                let (lo, hi) = cross.cross_edge_endpoints(i);
                let (apex, end) = if view == View::Lower {
                    (hi, lo)
                } else {
                    (lo, hi)
                };
                by_apex[apex].push((edge.id, end));
            }
        }
        Ok(Legs {
            view,
            apex_layer,
            base_layer,
            by_apex,
        })
    }

    fn apex(&self, index: usize) -> CellRef {
        node(self.apex_layer, index)
    }
}

fn node(layer: LayerId, index: usize) -> CellRef {
    CellRef::Intra {
        layer,
        order: 0,
        index,
    }
}

/// Union-find over the intra edges of one layer.
fn layer_components(complex: &CellMultiComplex, layer: LayerId) -> UnionFind<usize> {
    let l = complex.layer(layer).expect("layer of the pair");
    let mut uf = UnionFind::new(l.node_count());
    for e in 0..l.cells(1).len() {
        let (a, b) = l.edge_endpoints(e);
        uf.union(a, b);
    }
    uf
}

/// Every cone with its apex on `apex_layer`.
///
/// A cone is filled when some cell of class `(1,0)` (apex on the upper layer)
/// or `(0,1)` (apex on the lower layer) has exactly its two legs as cross
/// faces.
pub fn enumerate_cones(
    complex: &CellMultiComplex,
    pair: LayerPair,
    apex_layer: LayerId,
) -> Result<ConeInventory> {
    let legs = Legs::new(complex, pair, apex_layer)?;
    let uf = layer_components(complex, legs.base_layer);
    let filled_class = legs.view.coface_class(CellClass::CROSS_EDGE);
    let filled_cells: Vec<Vec<(CellRef, i8)>> = complex
        .cross_complex(pair)
        .map(|c| {
            c.cells(filled_class)
                .iter()
                .map(|cell| cell.cross_faces().map(|f| (f.cell, f.sign)).collect())
                .collect()
        })
        .unwrap_or_default();
    let filled_pairs: BTreeSet<(CellRef, CellRef)> = filled_cells
        .iter()
        .filter(|faces| faces.len() == 2)
        .map(|faces| ordered(faces[0].0, faces[1].0))
        .collect();

    let mut inventory = ConeInventory::default();
    for (v, at) in legs.by_apex.iter().enumerate() {
        let d = at.len();
        if d < 2 {
            continue;
        }
        let apex = legs.apex(v);
        let mut closed = 0;
        let mut open = 0;
        for i in 0..d {
            for j in i + 1..d {
                let (a, b) = (at[i], at[j]);
                let kind = if uf.equiv(a.1, b.1) {
                    ConeKind::Closed
                } else {
                    ConeKind::Open
                };
                let filled = filled_pairs.contains(&ordered(a.0, b.0));
                if !filled {
                    match kind {
                        ConeKind::Closed => closed += 1,
                        ConeKind::Open => open += 1,
                    }
                }
                inventory.cones.push(Cone {
                    apex,
                    endpoints: [node(legs.base_layer, a.1), node(legs.base_layer, b.1)],
                    legs: [a.0, b.0],
                    kind,
                    filled,
                });
            }
        }
        let incidence: Vec<Vec<i64>> = filled_cells
            .iter()
            .map(|faces| {
                at.iter()
                    .map(|(leg, _)| {
                        faces
                            .iter()
                            .find(|(f, _)| f == leg)
                            .map_or(0, |&(_, s)| s as i64)
                    })
                    .collect()
            })
            .collect();
        let filled_rank = integer_rank(&incidence);
        inventory.apexes.push(ApexSummary {
            apex,
            degree: d,
            filled_rank,
            independent_unfilled: d - 1 - filled_rank,
            unfilled_closed: closed,
            unfilled_open: open,
        });
    }
    Ok(inventory)
}

fn ordered(a: CellRef, b: CellRef) -> (CellRef, CellRef) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Hub statistics of the apex of at least one unfilled cone.
#[derive(Clone, Debug, PartialEq)]
pub struct HubScore {
    pub node: CellRef,
    pub label: u64,
    /// `Σ |h|` over the cross-edges at the node.
    pub harmonic_energy: f64,
    /// `|div|` at the node.
    pub divergence_value: f64,
    /// Unfilled cones with this apex.
    pub cone_count: usize,
    pub closed: usize,
    pub open: usize,
    pub independent_cones: usize,
    /// Removing the node splits a connected cluster of the other layer.
    pub disconnects: bool,
}

/// Ranks the apexes of unfilled cones in the given view by harmonic energy,
/// then divergence, then node id.
///
/// `harmonic` lives on the cross-edges of the pair and `div` on the vertices
/// of the view's opposite layer, where the apexes are.
pub fn harmonic_hubs(
    complex: &CellMultiComplex,
    pair: LayerPair,
    view: View,
    harmonic: &Cochain,
    div: &Cochain,
) -> Result<Vec<HubScore>> {
    let apex_layer = view.opposite_layer(pair);
    let legs = Legs::new(complex, pair, apex_layer)?;
    harmonic.check_index(&complex.class_members(pair, CellClass::CROSS_EDGE))?;
    div.check_index(&complex.intra_cells(apex_layer, 0))?;
    let inventory = enumerate_cones(complex, pair, apex_layer)?;
    let before = cluster_count(complex, &legs, None);

    let mut hubs: Vec<HubScore> = inventory
        .apexes
        .iter()
        .filter(|a| a.unfilled() > 0)
        .map(|a| {
            let v = a.apex.index();
            let harmonic_energy = legs.by_apex[v]
                .iter()
                .map(|(leg, _)| harmonic.get(leg).unwrap_or(0.0).abs())
                .sum();
            HubScore {
                node: a.apex,
                label: complex.node_label(&a.apex).unwrap_or_default(),
                harmonic_energy,
                divergence_value: div.values()[v].abs(),
                cone_count: a.unfilled(),
                closed: a.unfilled_closed,
                open: a.unfilled_open,
                independent_cones: a.independent_unfilled,
                disconnects: cluster_count(complex, &legs, Some(v)) > before,
            }
        })
        .collect();
    hubs.sort_by(|a, b| {
        b.harmonic_energy
            .total_cmp(&a.harmonic_energy)
            .then(b.divergence_value.total_cmp(&a.divergence_value))
            .then(a.node.cmp(&b.node))
    });
    Ok(hubs)
}

/// Components among the other layer's vertices of the graph made of that
/// layer's intra edges and the pair's cross-edges, optionally without one apex.
fn cluster_count(complex: &CellMultiComplex, legs: &Legs, removed: Option<usize>) -> usize {
    let base = complex.layer(legs.base_layer).expect("layer of the pair");
    let nb = base.node_count();
    let mut uf = UnionFind::new(nb + legs.by_apex.len());
    for e in 0..base.cells(1).len() {
        let (a, b) = base.edge_endpoints(e);
        uf.union(a, b);
    }
    for (v, at) in legs.by_apex.iter().enumerate() {
        if Some(v) == removed {
            continue;
        }
        for &(_, end) in at {
            uf.union(end, nb + v);
        }
    }
    (0..nb).map(|i| uf.find(i)).collect::<BTreeSet<_>>().len()
}

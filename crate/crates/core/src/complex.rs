//! Data model of a cell multicomplex: layers of intra-layer cells plus
//! cross-complexes of cells whose faces sit on two different layers.
//!
//! Every cell is addressed by a [`CellRef`], which doubles as the canonical
//! textual id used in files (`L<layer>/k<order>/<index>` for intra cells,
//! `X<lower>-<upper>/c<k>,<n>/<index>` for cross cells). Cells are kept per
//! class in insertion order and every matrix in the crate indexes them by
//! that order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type LayerId = u32;

/// An ordered pair of layers `(lower, upper)` with `lower < upper`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LayerPair {
    lower: LayerId,
    upper: LayerId,
}

impl LayerPair {
    pub fn new(lower: LayerId, upper: LayerId) -> Result<Self> {
        if lower == upper {
            return Err(Error::SameLayer { lower, upper });
        }
        if lower > upper {
            return Err(Error::NonCanonicalPair { lower, upper });
        }
        Ok(LayerPair { lower, upper })
    }

    pub fn lower(&self) -> LayerId {
        self.lower
    }

    pub fn upper(&self) -> LayerId {
        self.upper
    }
}

impl fmt::Display for LayerPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lower, self.upper)
    }
}

/// Face orders `(k, n)` of a cell on the lower and upper layer of a pair;
/// `-1` marks the absence of faces on that layer.
///
/// `(k, -1)` denotes the intra cells of order `k` on the lower layer and
/// `(-1, n)` the intra cells of order `n` on the upper layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellClass {
    pub k: i8,
    pub n: i8,
}

impl CellClass {
    pub const CROSS_EDGE: CellClass = CellClass { k: 0, n: 0 };

    pub const fn new(k: i8, n: i8) -> Self {
        CellClass { k, n }
    }

    /// Both face orders are non-negative.
    pub fn is_cross(&self) -> bool {
        self.k >= 0 && self.n >= 0
    }

    /// Order of the cross cells in this class, if the class is a valid cross class.
    pub fn cross_order(&self) -> Option<u8> {
        match (self.k, self.n) {
            (0, 0) => Some(1),
            (1, 0) | (0, 1) | (1, 1) => Some(2),
            (2, 0) | (0, 2) | (2, 1) | (1, 2) => Some(3),
            _ => None,
        }
    }
}

impl fmt::Display for CellClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.k, self.n)
    }
}

/// Address of a cell inside a [`CellMultiComplex`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellRef {
    Intra {
        layer: LayerId,
        order: u8,
        index: usize,
    },
    Cross {
        pair: LayerPair,
        class: CellClass,
        index: usize,
    },
}

impl CellRef {
    pub fn order(&self) -> u8 {
        match self {
            CellRef::Intra { order, .. } => *order,
            CellRef::Cross { class, .. } => class.cross_order().unwrap_or(0),
        }
    }

    pub fn index(&self) -> usize {
        match self {
            CellRef::Intra { index, .. } | CellRef::Cross { index, .. } => *index,
        }
    }

    /// Layer of an intra cell.
    pub fn layer(&self) -> Option<LayerId> {
        match self {
            CellRef::Intra { layer, .. } => Some(*layer),
            CellRef::Cross { .. } => None,
        }
    }

    pub fn is_cross(&self) -> bool {
        matches!(self, CellRef::Cross { .. })
    }
}

impl fmt::Display for CellRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellRef::Intra {
                layer,
                order,
                index,
            } => write!(f, "L{layer}/k{order}/{index}"),
            CellRef::Cross { pair, class, index } => {
                write!(
                    f,
                    "X{}-{}/c{},{}/{index}",
                    pair.lower, pair.upper, class.k, class.n
                )
            }
        }
    }
}

impl FromStr for CellRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidCellId(s.to_string());
        let mut parts = s.split('/');
        let (head, mid, tail) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(h), Some(m), Some(t), None) => (h, m, t),
            _ => return Err(bad()),
        };
        let index: usize = tail.parse().map_err(|_| bad())?;
        if let Some(layer) = head.strip_prefix('L') {
            let layer: LayerId = layer.parse().map_err(|_| bad())?;
            let order: u8 = mid
                .strip_prefix('k')
                .and_then(|o| o.parse().ok())
                .ok_or_else(bad)?;
            if order > 2 {
                return Err(bad());
            }
            Ok(CellRef::Intra {
                layer,
                order,
                index,
            })
        } else if let Some(pair) = head.strip_prefix('X') {
            let (l, m) = pair.split_once('-').ok_or_else(bad)?;
            let pair = LayerPair::new(l.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?)
                .map_err(|_| bad())?;
            let (k, n) = mid
                .strip_prefix('c')
                .and_then(|c| c.split_once(','))
                .ok_or_else(bad)?;
            let class =
                CellClass::new(k.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?);
            if class.cross_order().is_none() {
                return Err(bad());
            }
            Ok(CellRef::Cross { pair, class, index })
        } else {
            Err(bad())
        }
    }
}

/// A face of a cell together with its incidence sign (`+1` coherent, `-1` anti-coherent).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedFace {
    pub cell: CellRef,
    pub sign: i8,
}

impl SignedFace {
    pub fn new(cell: CellRef, sign: i8) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        SignedFace { cell, sign }
    }
}

/// A cell of one layer. Nodes have an empty boundary, edges list their tail
/// (`-1`) and head (`+1`), 2-cells list each bounding edge once.
#[derive(Clone, Debug, PartialEq)]
pub struct IntraCell {
    pub id: CellRef,
    pub boundary: Vec<SignedFace>,
}

/// A cell whose faces lie on two layers.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossCell {
    pub id: CellRef,
    pub boundary: Vec<SignedFace>,
}

impl CrossCell {
    /// Faces of this cell lying inside the given layer.
    pub fn layer_faces(&self, layer: LayerId) -> impl Iterator<Item = &SignedFace> {
        self.boundary
            .iter()
            .filter(move |f| f.cell.layer() == Some(layer))
    }

    /// Faces of this cell that are themselves cross cells.
    pub fn cross_faces(&self) -> impl Iterator<Item = &SignedFace> {
        self.boundary.iter().filter(|f| f.cell.is_cross())
    }
}

/// One layer: node labels plus its intra cells of order 0, 1 and 2.
#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub(crate) id: LayerId,
    pub(crate) labels: Vec<u64>,
    pub(crate) cells: [Vec<IntraCell>; 3],
}

impl Layer {
    pub fn id(&self) -> LayerId {
        self.id
    }

    /// External node labels in node-index order.
    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn node_index(&self, label: u64) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn cells(&self, order: u8) -> &[IntraCell] {
        self.cells.get(order as usize).map_or(&[], |c| c.as_slice())
    }

    pub fn node_count(&self) -> usize {
        self.cells[0].len()
    }

    /// `(tail, head)` node indices of an intra edge.
    pub fn edge_endpoints(&self, edge: usize) -> (usize, usize) {
        endpoints(&self.cells[1][edge].boundary)
    }
}

pub(crate) fn endpoints(boundary: &[SignedFace]) -> (usize, usize) {
    let mut tail = 0;
    let mut head = 0;
    for f in boundary {
        if f.sign < 0 {
            tail = f.cell.index();
        } else {
            head = f.cell.index();
        }
    }
    (tail, head)
}

/// All cross cells between one pair of layers, grouped by class.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossComplex {
    pub(crate) pair: LayerPair,
    pub(crate) classes: BTreeMap<CellClass, Vec<CrossCell>>,
}

impl CrossComplex {
    pub fn pair(&self) -> LayerPair {
        self.pair
    }

    pub fn cells(&self, class: CellClass) -> &[CrossCell] {
        self.classes.get(&class).map_or(&[], |c| c.as_slice())
    }

    /// `(lower node index, upper node index)` of a cross-edge.
    pub fn cross_edge_endpoints(&self, edge: usize) -> (usize, usize) {
        endpoints(&self.cells(CellClass::CROSS_EDGE)[edge].boundary)
    }

    pub fn classes(&self) -> impl Iterator<Item = (CellClass, usize)> + '_ {
        self.classes.iter().map(|(c, v)| (*c, v.len()))
    }
}

/// A validated, immutable cell multicomplex.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CellMultiComplex {
    pub(crate) layers: Vec<Layer>,
    pub(crate) cross: Vec<CrossComplex>,
}

impl CellMultiComplex {
    /// The complex with no layers.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer(&self, id: LayerId) -> Option<&Layer> {
        self.layers
            .binary_search_by_key(&id, |l| l.id)
            .ok()
            .map(|i| &self.layers[i])
    }

    pub fn cross_complexes(&self) -> &[CrossComplex] {
        &self.cross
    }

    pub fn cross_complex(&self, pair: LayerPair) -> Option<&CrossComplex> {
        self.cross
            .binary_search_by_key(&pair, |c| c.pair)
            .ok()
            .map(|i| &self.cross[i])
    }

    /// Fails unless both layers of the pair exist.
    pub fn check_pair(&self, pair: LayerPair) -> Result<()> {
        if self.layer(pair.lower).is_some() && self.layer(pair.upper).is_some() {
            Ok(())
        } else {
            Err(Error::UnknownPair {
                lower: pair.lower,
                upper: pair.upper,
            })
        }
    }

    /// Number of cross cells `N_{k,n}` of a pair, or the intra count for `-1` classes.
    pub fn class_count(&self, pair: LayerPair, class: CellClass) -> usize {
        self.class_members(pair, class).len()
    }

    /// Counts of every non-empty cross class of every pair.
    pub fn class_counts(&self) -> BTreeMap<(LayerPair, CellClass), usize> {
        self.cross
            .iter()
            .flat_map(|c| c.classes().map(move |(cl, n)| ((c.pair, cl), n)))
            .filter(|(_, n)| *n > 0)
            .collect()
    }

    /// Ordered cells of class `(k, n)` for a pair.
    ///
    /// `n = -1` yields the order-`k` intra cells of the lower layer and
    /// `k = -1` the order-`n` intra cells of the upper layer.
    pub fn cells_of_class(&self, pair: LayerPair, k: i8, n: i8) -> Result<Vec<CellRef>> {
        self.check_pair(pair)?;
        if k < -1 || n < -1 || (k == -1 && n == -1) || k > 2 || n > 2 {
            return Err(Error::UnsupportedClass { k, n });
        }
        Ok(self.class_members(pair, CellClass::new(k, n)))
    }

    /// Like [`cells_of_class`](Self::cells_of_class) but returns an empty list for
    /// classes that cannot hold cells.
    pub(crate) fn class_members(&self, pair: LayerPair, class: CellClass) -> Vec<CellRef> {
        let CellClass { k, n } = class;
        if k < -1 || n < -1 {
            return Vec::new();
        }
        match (k, n) {
            (-1, -1) => Vec::new(),
            (k, -1) => self.intra_cells(pair.lower, k as u8),
            (-1, n) => self.intra_cells(pair.upper, n as u8),
            _ => self
                .cross_complex(pair)
                .map(|c| c.cells(class).iter().map(|cell| cell.id).collect())
                .unwrap_or_default(),
        }
    }

    /// Ordered intra cells of one order on one layer.
    pub fn intra_cells(&self, layer: LayerId, order: u8) -> Vec<CellRef> {
        self.layer(layer)
            .map(|l| l.cells(order).iter().map(|c| c.id).collect())
            .unwrap_or_default()
    }

    /// Signed faces of a cell, `None` when the cell does not exist.
    pub fn boundary(&self, cell: &CellRef) -> Option<&[SignedFace]> {
        match *cell {
            CellRef::Intra {
                layer,
                order,
                index,
            } => self
                .layer(layer)?
                .cells(order)
                .get(index)
                .map(|c| c.boundary.as_slice()),
            CellRef::Cross { pair, class, index } => self
                .cross_complex(pair)?
                .cells(class)
                .get(index)
                .map(|c| c.boundary.as_slice()),
        }
    }

    pub fn contains(&self, cell: &CellRef) -> bool {
        self.boundary(cell).is_some()
    }

    /// External label of a node cell.
    pub fn node_label(&self, node: &CellRef) -> Option<u64> {
        match *node {
            CellRef::Intra {
                layer,
                order: 0,
                index,
            } => self.layer(layer)?.labels.get(index).copied(),
            _ => None,
        }
    }

    /// View of the whole multicomplex as a single cell complex.
    pub fn flatten(&self) -> MonolayerComplex {
        let mut flat = MonolayerComplex::default();
        for layer in &self.layers {
            flat.nodes.extend(layer.cells[0].iter().map(|c| c.id));
            flat.edges.extend(layer.cells[1].iter().map(|c| c.id));
            flat.cells2.extend(layer.cells[2].iter().map(|c| c.id));
        }
        for cross in &self.cross {
            flat.edges
                .extend(cross.cells(CellClass::CROSS_EDGE).iter().map(|c| c.id));
            for (class, cells) in &cross.classes {
                if class.cross_order() == Some(2) {
                    flat.cells2.extend(cells.iter().map(|c| c.id));
                }
            }
        }
        flat
    }
}

/// The flattened cell lists of a multicomplex: every node, every edge
/// (intra and cross) and every 2-cell (intra and order-2 cross cells).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MonolayerComplex {
    pub nodes: Vec<CellRef>,
    pub edges: Vec<CellRef>,
    pub cells2: Vec<CellRef>,
}

impl MonolayerComplex {
    pub fn cells(&self, order: u8) -> &[CellRef] {
        match order {
            0 => &self.nodes,
            1 => &self.edges,
            2 => &self.cells2,
            _ => &[],
        }
    }
}

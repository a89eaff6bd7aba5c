//! Instance files: one line of JSON header followed by an edge list.
//!
//! The header of a planted instance carries the parameters, the adversary
//! record and the sorted planted set `K`. Only the planted graph is stored;
//! the base graph is re-sampled from the seed when the instance is loaded.
//! Files without a header (plain edge lists or DIMACS) load as bare graphs.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::graph::io::{edge_list_string, read_any, read_edge_list_from_lines};
use crate::graph::{Graph, VertexSet};
use crate::hardness::{PlantedHInstance, ReductionOutput};
use crate::randgen::{sample_gnp, Adversary, GenParams, PlantedInstance};
use crate::{Error, Result};

pub const BUNDLE_SCHEMA: &str = "planted-clique/bundle/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BundleKind {
    Planted,
    Gadget,
    PlantedH,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleHeader {
    pub schema: String,
    pub kind: BundleKind,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub params: Option<GenParams>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub adversary: Option<Adversary>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none", default)]
    pub planted: Option<Vec<usize>>,
    /// Reduction or gadget-planting record.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hardness: Option<serde_json::Value>,
}

#[derive(Clone, Debug)]
pub struct Bundle {
    pub header: Option<BundleHeader>,
    pub graph: Graph,
}

impl Bundle {
    fn with_header(kind: BundleKind, graph: Graph) -> Self {
        Self {
            header: Some(BundleHeader {
                schema: BUNDLE_SCHEMA.into(),
                kind,
                n: graph.n(),
                params: None,
                adversary: None,
                planted: None,
                hardness: None,
            }),
            graph,
        }
    }

    pub fn from_instance(inst: &PlantedInstance) -> Self {
        let mut b = Self::with_header(BundleKind::Planted, inst.planted_graph.clone());
        let h = b.header.as_mut().expect("header set");
        h.params = Some(inst.params);
        h.adversary = Some(inst.adversary.clone());
        h.planted = Some(inst.planted.to_vec());
        b
    }

    pub fn from_reduction(r: &ReductionOutput) -> Result<Self> {
        let mut b = Self::with_header(BundleKind::Gadget, r.gadget.clone());
        b.header.as_mut().expect("header set").hardness = Some(serde_json::to_value(r)?);
        Ok(b)
    }

    pub fn from_planted_h(inst: &PlantedHInstance) -> Result<Self> {
        let mut b = Self::with_header(BundleKind::PlantedH, inst.graph.clone());
        let mut record = serde_json::to_value(inst)?;
        record["h"] = serde_json::Value::String(edge_list_string(&inst.h));
        b.header.as_mut().expect("header set").hardness = Some(record);
        Ok(b)
    }

    pub fn to_string(&self) -> Result<String> {
        let mut out = String::new();
        if let Some(h) = &self.header {
            out.push_str(&serde_json::to_string(h)?);
            out.push('\n');
        }
        out.push_str(&edge_list_string(&self.graph));
        Ok(out)
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_string()?.as_bytes())?;
        Ok(())
    }

    /// Parses a bundle, or a headerless edge list / DIMACS file.
    pub fn parse(text: &str) -> Result<Self> {
        let Some(first) = text.lines().position(|l| !l.trim().is_empty()) else {
            return Err(Error::Parse {
                line: 1,
                msg: "empty input".into(),
            });
        };
        let line = text.lines().nth(first).expect("line exists").trim();
        if !line.starts_with('{') {
            return Ok(Self {
                header: None,
                graph: read_any(text)?,
            });
        }
        let header: BundleHeader = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: first + 1,
            msg: format!("bad header: {e}"),
        })?;
        if header.schema != BUNDLE_SCHEMA {
            return Err(Error::Parse {
                line: first + 1,
                msg: format!("unknown schema {:?}", header.schema),
            });
        }
        let body = text.lines().skip(first + 1).map(|l| Ok(l.to_string()));
        let graph = read_edge_list_from_lines(body, first + 1)?;
        if graph.n() != header.n {
            return Err(Error::Parse {
                line: first + 1,
                msg: format!("header says n={}, edge list has {}", header.n, graph.n()),
            });
        }
        Ok(Self {
            header: Some(header),
            graph,
        })
    }

    /// Planted set from the header, if the file has one.
    pub fn planted(&self) -> Result<Option<VertexSet>> {
        match self.header.as_ref().and_then(|h| h.planted.as_ref()) {
            Some(k) => Ok(Some(VertexSet::from_vertices(self.graph.n(), k.iter().copied())?)),
            None => Ok(None),
        }
    }

    /// Rebuilds the planted instance, re-sampling the base graph from the
    /// seed and auditing the stored graph against it.
    pub fn to_instance(&self) -> Result<PlantedInstance> {
        let missing = || Error::InvalidParameter("input carries no planted-instance header".into());
        let h = self.header.as_ref().ok_or_else(missing)?;
        if h.kind != BundleKind::Planted {
            return Err(missing());
        }
        let (params, adversary) = (h.params.ok_or_else(missing)?, h.adversary.clone().ok_or_else(missing)?);
        let planted = self.planted()?.ok_or_else(missing)?;
        let inst = PlantedInstance {
            base: sample_gnp(params.n, params.p, params.seed)?,
            planted_graph: self.graph.clone(),
            planted,
            params,
            adversary,
        };
        inst.audit()?;
        Ok(inst)
    }
}

impl Bundle {
    /// Rebuilds a gadget-planting instance from a `planted-h` bundle.
    pub fn to_planted_h(&self) -> Result<PlantedHInstance> {
        let missing = |what: &str| Error::InvalidParameter(format!("planted-h bundle lacks {what}"));
        let h = self.header.as_ref().ok_or_else(|| missing("a header"))?;
        if h.kind != BundleKind::PlantedH {
            return Err(missing("the planted-h kind"));
        }
        let rec = h.hardness.as_ref().ok_or_else(|| missing("the hardness record"))?;
        let field = |name: &str| rec.get(name).cloned().ok_or_else(|| missing(name));
        let gadget = field("h")?;
        let gadget = read_any(gadget.as_str().ok_or_else(|| missing("h"))?)?;
        let inst = PlantedHInstance {
            graph: self.graph.clone(),
            h: gadget,
            partition: serde_json::from_value(field("partition")?)?,
            copy: serde_json::from_value(field("M")?)?,
            i_prime: serde_json::from_value(field("i_prime")?)?,
            params: serde_json::from_value(field("params")?)?,
            failed_default: serde_json::from_value(field("failed_default")?)?,
        };
        inst.audit()?;
        Ok(inst)
    }
}

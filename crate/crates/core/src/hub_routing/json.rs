use serde::{Deserialize, Serialize};

use super::{HubTree, HubTreeBuilder};
use crate::topology::Topology;
use crate::{Error, Result};

/// Nested form: `{"leaf": id}` or `{"children": [...], "capacity": c}`, where
/// `capacity` belongs to the edge towards the parent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HubTreeJson {
    Leaf {
        leaf: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        capacity: Option<f64>,
    },
    Internal {
        children: Vec<HubTreeJson>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        capacity: Option<f64>,
    },
}

impl HubTree {
    pub fn to_json(&self, t: &Topology) -> HubTreeJson {
        self.subtree_json(self.root, t)
    }

    fn subtree_json(&self, v: usize, t: &Topology) -> HubTreeJson {
        let capacity = if v == self.root { None } else { self.capacity[v] };
        if self.is_leaf(v) {
            HubTreeJson::Leaf { leaf: t.id(v).to_string(), capacity }
        } else {
            let children = self.children[v].iter().map(|&c| self.subtree_json(c, t)).collect();
            HubTreeJson::Internal { children, capacity }
        }
    }

    /// Rebuilds a tree whose leaves are exactly the topology's nodes. Internal
    /// nodes are numbered in post-order.
    pub fn from_json(json: &HubTreeJson, t: &Topology) -> Result<Self> {
        let mut builder = HubTreeBuilder::new(t.node_count());
        let mut caps = Vec::new();
        let root = build(json, t, &mut builder, &mut caps)?;
        if matches!(json, HubTreeJson::Leaf { .. }) {
            return Err(Error::InvalidHubTree("the root must be internal".into()));
        }
        let mut tree = builder.build()?;
        debug_assert_eq!(tree.root(), root);
        for (v, c) in caps {
            if v != root {
                tree.set_capacity(v, c)?;
            }
        }
        Ok(tree)
    }

    pub fn to_json_string(&self, t: &Topology) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json(t))?)
    }

    pub fn from_json_str(source: &str, t: &Topology) -> Result<Self> {
        Self::from_json(&serde_json::from_str(source)?, t)
    }
}

fn build(json: &HubTreeJson, t: &Topology, b: &mut HubTreeBuilder, caps: &mut Vec<(usize, f64)>) -> Result<usize> {
    let (v, capacity) = match json {
        HubTreeJson::Leaf { leaf, capacity } => (t.index_of(leaf).ok_or_else(|| Error::UnknownNode(leaf.clone()))?, capacity),
        HubTreeJson::Internal { children, capacity } => {
            let ids = children.iter().map(|c| build(c, t, b, caps)).collect::<Result<Vec<_>>>()?;
            (b.add_internal(&ids)?, capacity)
        }
    };
    if let Some(c) = capacity {
        caps.push((v, *c));
    }
    Ok(v)
}

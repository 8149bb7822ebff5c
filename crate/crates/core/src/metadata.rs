use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::construct::Recipe;
use crate::extend::ExtensionRecord;

/// Auxiliary block stored next to the weights in the network JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetMetadata {
    /// Constructor that produced the weights, e.g. `relu-classifier-1d`.
    pub family: String,
    /// Constructor parameters (b, h, alpha, c, K, L, ...).
    #[serde(default)]
    pub params: Map<String, Value>,
    /// Analytic bound on `sup |f|` over the whole input space.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_bound: Option<f64>,
    /// Max-norm distance from the grid beyond which the output vanishes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dead_zone_radius: Option<f64>,
    /// Everything needed to rebuild the network and its generating training set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipe: Option<Recipe>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extensions: Vec<ExtensionRecord>,
}

impl NetMetadata {
    pub fn new(family: impl Into<String>) -> Self {
        NetMetadata {
            family: family.into(),
            params: Map::new(),
            output_bound: None,
            dead_zone_radius: None,
            recipe: None,
            extensions: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn output_bound(mut self, bound: f64) -> Self {
        self.output_bound = Some(bound);
        self
    }

    pub fn dead_zone_radius(mut self, r: f64) -> Self {
        self.dead_zone_radius = Some(r);
        self
    }
}

// SPDX-License-Identifier: Apache-2.0

//! The default set of test groups and its JSON manifest form.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::GroupSpec;

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed manifest: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad group spec {spec:?}: {message}")]
    Spec { spec: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub groups: Vec<String>,
}

impl Manifest {
    pub fn specs(&self) -> Result<Vec<GroupSpec>, ManifestError> {
        self.groups
            .iter()
            .map(|s| {
                s.parse()
                    .map_err(|e: crate::groups::GroupError| ManifestError::Spec {
                        spec: s.clone(),
                        message: e.to_string(),
                    })
            })
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self, ManifestError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ManifestError> {
        let text = std::fs::read_to_string(path).map_err(|source| ManifestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

/// Cyclic groups of order 2 to 64, dihedral groups of order 4 to 100,
/// generalized quaternion and quasidihedral 2-groups up to order 64, `S_3`
/// to `S_5`, and a few abelian products.
pub fn default_specs() -> Vec<GroupSpec> {
    use GroupSpec::*;
    let mut specs: Vec<GroupSpec> = (2..=64).map(Cyclic).collect();
    specs.extend((4..=100).step_by(2).map(Dihedral));
    specs.extend([8, 16, 32, 64].map(Quaternion));
    specs.extend([16, 32, 64].map(Quasidihedral));
    specs.extend([3, 4, 5].map(Symmetric));
    specs.push(Product(vec![Cyclic(2), Cyclic(4)]));
    specs.extend(
        (3..=15)
            .step_by(2)
            .map(|m| Product(vec![Cyclic(2), Cyclic(m)])),
    );
    specs.push(Product(vec![Cyclic(3), Cyclic(9)]));
    specs
}

pub fn default_manifest() -> Manifest {
    Manifest {
        groups: default_specs().iter().map(ToString::to_string).collect(),
    }
}

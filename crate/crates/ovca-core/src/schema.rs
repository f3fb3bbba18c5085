//! Column schemas for the screening-variable table.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// The 18 TVUS-derived feature columns, left/right paired where applicable.
pub const CANONICAL_FEATURES: [&str; 18] = [
    "numcystl",
    "numcyst",
    "ovary_diaml",
    "ovary_diamr",
    "ovary_voll",
    "ovary_volr",
    "ovcyst_diaml",
    "ovcyst_diamr",
    "ovcyst_morphl",
    "ovcyst_morphr",
    "ovcyst_outlinel",
    "ovcyst_outliner",
    "ovcyst_solidl",
    "ovcyst_solidr",
    "ovcyst_suml",
    "ovcyst_sumr",
    "ovcyst_voll",
    "ovcyst_volr",
];

/// Name of the three-class target column.
pub const TARGET_COLUMN: &str = "ovar_result";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    NumericContinuous,
    NumericOrdinal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSchema {
    pub name: String,
    pub kind: ColumnKind,
    pub allowed_missing: bool,
}

/// An ordered list of feature columns. Names are unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    columns: Vec<ColumnSchema>,
}

impl Schema {
    pub fn new(columns: Vec<ColumnSchema>) -> Result<Self> {
        for (i, col) in columns.iter().enumerate() {
            if columns[..i].iter().any(|c| c.name == col.name) {
                return Err(Error::InvalidParameter {
                    what: alloc::format!("duplicate column name `{}`", col.name),
                });
            }
        }
        Ok(Schema { columns })
    }

    /// The canonical 18-feature screening schema. Ordinal morphology, outline,
    /// solid and summary columns allow missing values like everything else.
    pub fn canonical() -> Self {
        let columns = CANONICAL_FEATURES
            .iter()
            .map(|&name| {
                let kind = if name.starts_with("ovcyst_morph")
                    || name.starts_with("ovcyst_outline")
                    || name.starts_with("ovcyst_solid")
                    || name.starts_with("ovcyst_sum")
                    || name.starts_with("numcyst")
                {
                    ColumnKind::NumericOrdinal
                } else {
                    ColumnKind::NumericContinuous
                };
                ColumnSchema {
                    name: name.to_string(),
                    kind,
                    allowed_missing: true,
                }
            })
            .collect();
        Schema { columns }
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[ColumnSchema] {
        &self.columns
    }

    pub fn name(&self, index: usize) -> &str {
        &self.columns[index].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Keep only the columns at `indices` (ascending, deduplicated by caller).
    pub fn select(&self, indices: &[usize]) -> Schema {
        Schema {
            columns: indices.iter().map(|&i| self.columns[i].clone()).collect(),
        }
    }
}

//! The fixed 33-feature schema.
//!
//! Feature ids, order, and definitions are frozen; any change to a definition
//! must bump [`SCHEMA_VERSION`] so stored models refuse mismatched inputs.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

/// One feature definition. `description` doubles as the noun phrase in the
/// default feedback sentences ("increase the <description>").
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureDef {
    pub id: u8,
    pub name: &'static str,
    pub description: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSchema {
    pub version: String,
    pub features: Vec<FeatureDef>,
}

const DEFS: [(&str, &str); 33] = [
    ("n_functions", "number of user defined functions"),
    ("n_assignments", "number of assignments"),
    ("nodes_per_function", "number of syntax nodes per function"),
    ("lines_per_function", "number of lines of code per function"),
    ("total_lines", "total lines of code"),
    ("n_literals", "number of literals"),
    ("whitespace_ratio", "proportion of white-space characters"),
    ("n_empty_lines", "number of empty lines"),
    ("deepest_indentation", "deepest level of indentation"),
    ("n_if_statements", "number of if statements"),
    ("n_comments", "number of comments"),
    ("nodes_per_line", "number of syntax nodes per line of code"),
    ("n_try_except", "number of try-except statements"),
    ("nodes_per_try", "number of syntax nodes per try-except statement"),
    ("nodes_per_if", "number of syntax nodes per if statement"),
    ("n_lists", "number of lists"),
    ("n_tuples", "number of tuples"),
    ("avg_literal_line", "average line number of literals"),
    ("avg_function_line", "average line number of function definitions"),
    ("avg_if_line", "average line number of if statements"),
    ("nodes_in_functions_ratio", "ratio of syntax nodes inside functions"),
    ("n_calls", "number of function calls"),
    ("n_pass", "number of pass statements"),
    ("n_break", "number of break statements"),
    ("n_continue", "number of continue statements"),
    ("n_globals", "number of global variables"),
    ("n_zero_one_int_literals", "number of zero and one integer literals"),
    ("avg_import_line", "average line number of import statements"),
    ("n_numeric_literals", "number of numeric literals"),
    ("n_comparisons", "number of comparisons"),
    ("n_returns", "number of return statements"),
    ("max_returns_per_function", "maximum number of return statements per function"),
    ("max_literals_per_if", "maximum number of literals per if statement"),
];

impl FeatureSchema {
    pub fn current() -> Self {
        let features = DEFS
            .iter()
            .enumerate()
            .map(|(i, (name, description))| FeatureDef {
                id: (i + 1) as u8,
                name,
                description,
            })
            .collect();
        Self {
            version: String::from(SCHEMA_VERSION),
            features,
        }
    }

    pub fn by_id(&self, id: u8) -> Option<&FeatureDef> {
        (id as usize).checked_sub(1).and_then(|i| self.features.get(i))
    }

    pub fn default_increase_phrase(def: &FeatureDef) -> String {
        format!("increase the {}", def.description)
    }

    pub fn default_decrease_phrase(def: &FeatureDef) -> String {
        format!("decrease the {}", def.description)
    }
}

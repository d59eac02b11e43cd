//! The 33 design statistics computed over a [`ProgramSyntax`].
//!
//! Every "per X" or "average over X" feature is zero-guarded: an empty
//! denominator yields 0, never NaN or infinity. Extraction is a pure function
//! of the tree and source facts, so identical text always produces identical
//! vectors.

use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::schema::SCHEMA_VERSION;
use crate::syntax::{LiteralKind, NodeKind, ProgramSyntax, SourceProgram, SyntaxNode};

pub const FEATURE_COUNT: usize = 33;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub schema_version: String,
    /// Exactly [`FEATURE_COUNT`] finite values in schema order.
    pub values: Vec<f64>,
}

/// Number of nodes in the subtree rooted at `node`, counting the node itself.
/// Nested constructs are counted fully inside every enclosing ancestor.
pub fn subtree_size(node: &SyntaxNode) -> usize {
    1 + node.children.iter().map(subtree_size).sum::<usize>()
}

fn count_in_subtree(node: &SyntaxNode, pred: &dyn Fn(&SyntaxNode) -> bool) -> usize {
    (pred(node) as usize) + node.children.iter().map(|c| count_in_subtree(c, pred)).sum::<usize>()
}

#[derive(Default)]
struct Tally {
    n_functions: usize,
    n_assignments: usize,
    function_nodes_sum: usize,
    function_lines_sum: usize,
    function_start_sum: usize,
    n_literals: usize,
    literal_start_sum: usize,
    n_numeric_literals: usize,
    n_zero_one_int_literals: usize,
    n_if: usize,
    if_nodes_sum: usize,
    if_start_sum: usize,
    max_literals_per_if: usize,
    n_try: usize,
    try_nodes_sum: usize,
    n_lists: usize,
    n_tuples: usize,
    n_calls: usize,
    n_pass: usize,
    n_break: usize,
    n_continue: usize,
    n_imports: usize,
    import_start_sum: usize,
    n_comparisons: usize,
    n_returns: usize,
    max_returns_per_function: usize,
    top_level_function_nodes: usize,
    max_block_depth: u32,
}

fn is_literal(node: &SyntaxNode) -> bool {
    matches!(node.kind, NodeKind::Literal(_))
}

fn walk(node: &SyntaxNode, in_function: bool, tally: &mut Tally) {
    tally.max_block_depth = tally.max_block_depth.max(node.block_depth);
    let mut child_in_function = in_function;
    match node.kind {
        NodeKind::FunctionDef => {
            tally.n_functions += 1;
            let size = subtree_size(node);
            tally.function_nodes_sum += size;
            tally.function_lines_sum += (node.end_line - node.start_line + 1) as usize;
            tally.function_start_sum += node.start_line as usize;
            let returns =
                count_in_subtree(node, &|n| matches!(n.kind, NodeKind::ReturnStmt));
            tally.max_returns_per_function = tally.max_returns_per_function.max(returns);
            if !in_function {
                tally.top_level_function_nodes += size;
            }
            child_in_function = true;
        }
        NodeKind::Assignment | NodeKind::AugAssignment => tally.n_assignments += 1,
        NodeKind::IfStmt => {
            tally.n_if += 1;
            tally.if_nodes_sum += subtree_size(node);
            tally.if_start_sum += node.start_line as usize;
            let literals = count_in_subtree(node, &is_literal);
            tally.max_literals_per_if = tally.max_literals_per_if.max(literals);
        }
        NodeKind::TryStmt => {
            tally.n_try += 1;
            tally.try_nodes_sum += subtree_size(node);
        }
        NodeKind::Literal(sub) => {
            tally.n_literals += 1;
            tally.literal_start_sum += node.start_line as usize;
            if matches!(sub, LiteralKind::Int | LiteralKind::Float | LiteralKind::Complex) {
                tally.n_numeric_literals += 1;
            }
            if sub == LiteralKind::Int && matches!(node.int_value, Some(0) | Some(1)) {
                tally.n_zero_one_int_literals += 1;
            }
        }
        NodeKind::ListDisplay => tally.n_lists += 1,
        NodeKind::TupleDisplay => tally.n_tuples += 1,
        NodeKind::Call => tally.n_calls += 1,
        NodeKind::PassStmt => tally.n_pass += 1,
        NodeKind::BreakStmt => tally.n_break += 1,
        NodeKind::ContinueStmt => tally.n_continue += 1,
        NodeKind::ImportStmt => {
            tally.n_imports += 1;
            tally.import_start_sum += node.start_line as usize;
        }
        NodeKind::Comparison => tally.n_comparisons += 1,
        NodeKind::ReturnStmt => tally.n_returns += 1,
        _ => {}
    }
    for child in &node.children {
        walk(child, child_in_function, tally);
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Compute the full 33-vector. `syntax` must have been produced from `source`.
pub fn extract_features(syntax: &ProgramSyntax, source: &SourceProgram) -> FeatureVector {
    let mut tally = Tally::default();
    walk(&syntax.tree, false, &mut tally);

    // The root module node counts itself, so total_nodes >= 1 and the
    // feature-21 denominator is never zero. The empty program still maps to
    // the all-zero vector because its line and character counts are zero.
    let total_nodes = subtree_size(&syntax.tree);
    let total_lines = source.line_count;

    let n_func = tally.n_functions as f64;
    let n_if = tally.n_if as f64;
    let n_try = tally.n_try as f64;
    let n_lit = tally.n_literals as f64;
    let n_imp = tally.n_imports as f64;

    let values = alloc::vec![
        n_func,
        tally.n_assignments as f64,
        ratio(tally.function_nodes_sum as f64, n_func),
        ratio(tally.function_lines_sum as f64, n_func),
        total_lines as f64,
        n_lit,
        ratio(syntax.whitespace_char_count as f64, source.char_count as f64),
        syntax.blank_line_count as f64,
        tally.max_block_depth as f64,
        n_if,
        syntax.comment_count as f64,
        ratio(total_nodes as f64, total_lines as f64),
        n_try,
        ratio(tally.try_nodes_sum as f64, n_try),
        ratio(tally.if_nodes_sum as f64, n_if),
        tally.n_lists as f64,
        tally.n_tuples as f64,
        ratio(tally.literal_start_sum as f64, n_lit),
        ratio(tally.function_start_sum as f64, n_func),
        ratio(tally.if_start_sum as f64, n_if),
        ratio(tally.top_level_function_nodes as f64, total_nodes as f64),
        tally.n_calls as f64,
        tally.n_pass as f64,
        tally.n_break as f64,
        tally.n_continue as f64,
        syntax.distinct_global_count as f64,
        tally.n_zero_one_int_literals as f64,
        ratio(tally.import_start_sum as f64, n_imp),
        tally.n_numeric_literals as f64,
        tally.n_comparisons as f64,
        tally.n_returns as f64,
        tally.max_returns_per_function as f64,
        tally.max_literals_per_if as f64,
    ];
    debug_assert_eq!(values.len(), FEATURE_COUNT);

    FeatureVector {
        schema_version: String::from(SCHEMA_VERSION),
        values,
    }
}

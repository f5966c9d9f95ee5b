//! Catalog of explicit hamiltonian cycles written in the path notation, and
//! the two-square surgery that turns one hamiltonian cycle into another.
//!
//! Entries are templates plus hypotheses; nothing is trusted until the
//! expanded walk has been checked against the graph.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::cayley::CayleyGraph;
use crate::dsl::{classify_walk, eval_expr, expand_text, walk_vertices, Binding, Bindings, DslError, Walk, WalkKind};
use crate::flows::{walk_flow, Flow, FlowError};
use crate::group::{AbelianGroup, GroupElement};
use crate::lattice::{left_kernel, solve, IntegerMatrix, LatticeError, RowLattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("unknown construction {0}")]
    UnknownName(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("missing binding {0}")]
    MissingBinding(String),
    #[error("{name} expanded to a walk that is not hamiltonian on its target: {walk}")]
    NotHamiltonianBug { name: String, walk: String },
    #[error("cycle does not contain the path {0}")]
    MissingPath(String),
    #[error("cycle does not contain the edge {0}")]
    MissingEdge(String),
    #[error("surgery result is not a hamiltonian cycle: {0}")]
    SurgeryNotSimple(String),
    #[error("no decomposition into the given squares")]
    NoDecomposition,
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

type Result<T> = std::result::Result<T, ConstructionError>;

/// A checkable condition on the bindings. Expressions use the path-notation
/// arithmetic, including `|s|` for element orders.
#[derive(Debug, Clone, Copy)]
pub enum Hypothesis {
    /// The connection set is exactly the named generators and their inverses.
    ConnectionIs(&'static [&'static str]),
    Even(&'static str),
    Odd(&'static str),
    AtLeast(&'static str, &'static str),
    Below(&'static str, &'static str),
    Equal(&'static str, &'static str),
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::ConnectionIs(gens) => {
                let parts: Vec<String> = gens.iter().map(|g| format!("±{g}")).collect();
                write!(f, "S = {{{}}}", parts.join(", "))
            }
            Hypothesis::Even(e) => write!(f, "{e} even"),
            Hypothesis::Odd(e) => write!(f, "{e} odd"),
            Hypothesis::AtLeast(a, b) => write!(f, "{a} >= {b}"),
            Hypothesis::Below(a, b) => write!(f, "{a} < {b}"),
            Hypothesis::Equal(a, b) => write!(f, "{a} = {b}"),
        }
    }
}

/// One piece of a template, used only when its guard expression is nonzero.
#[derive(Debug, Clone, Copy)]
pub struct Piece {
    pub guard: Option<&'static str>,
    pub text: &'static str,
}

const fn always(text: &'static str) -> Piece {
    Piece { guard: None, text }
}

const fn when(guard: &'static str, text: &'static str) -> Piece {
    Piece { guard: Some(guard), text }
}

#[derive(Debug, Clone, Copy)]
pub enum Template {
    /// The first piece whose guard holds.
    Walk(&'static [Piece]),
    /// The flow sum of every piece whose guard holds; must be a single cycle.
    FlowSum(&'static [Piece]),
}

/// Which vertices the cycle must cover exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Whole,
    /// `{x^i y^j u^k}` for `i < a`, `j < b`, `k < 2`, named by binding.
    Block { x: &'static str, y: &'static str, a: &'static str, b: &'static str },
    /// Everything outside the 3 x 3 x 2 block on `s, t, u`.
    OutsideBlock,
}

pub struct NamedConstruction {
    pub name: &'static str,
    pub params: &'static str,
    pub template: Template,
    pub hypotheses: &'static [Hypothesis],
    pub target: Target,
    /// Small legal instances, each verified by the test suite.
    pub examples: &'static [Example],
    derive: fn(&CayleyGraph, &mut Bindings) -> Result<()>,
}

/// A graph and bindings on which an entry applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Example {
    pub group: &'static str,
    pub conn: &'static str,
    pub bind: &'static str,
}

impl fmt::Debug for NamedConstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NamedConstruction").field("name", &self.name).finish_non_exhaustive()
    }
}

use Hypothesis::*;

const DEG4_ST: Hypothesis = ConnectionIs(&["s", "t"]);
const DEG6_STU: Hypothesis = ConnectionIs(&["s", "t", "u"]);

const H_STAR: &str =
    "(t^{n-1}, s^{|s|-1}, t^{-1}, s^{-(|s|-2)}, t^{-(n-2)}, (s, t^{n-3}, s, t^{-(n-3)})^{(|s|-2)/2}, s)";
const H_EVEN: &str = "((s^{m-1}, t_{2i-1}, s^{-(m-1)}, t_{2i})_{i=1}^{r/2}, \
     ((t_{r+i})_{i=1}^{n-r-1}, s, (t_{n-i}^{-1})_{i=1}^{n-r-1}, s)^{m/2})";

static CATALOG: &[NamedConstruction] = &[
    NamedConstruction {
        name: "E=H+2F-even",
        params: "s, t (generator or cycle t_1..t_n of the subgraph without s)",
        template: Template::Walk(&[always(H_EVEN)]),
        hypotheses: &[Even("m"), AtLeast("n", "3"), Even("r")],
        target: Target::Whole,
        examples: &[
            Example { group: "Z10", conn: "3,7,2,8", bind: "s=3,t=2" },
            Example { group: "Z2xZ4", conn: "(1,1),(1,3),(0,1),(0,3)", bind: "s=(1,1),t=(0,1)" },
            Example { group: "Z4xZ4", conn: "(1,0),(3,0),(0,1),(0,3)", bind: "s=(1,0),t=(0,1)" },
        ],
        derive: derive_quotient_path,
    },
    NamedConstruction {
        name: "Hstar",
        params: "s, t",
        template: Template::Walk(&[always(H_STAR)]),
        hypotheses: &[DEG4_ST, Even("|s|"), AtLeast("n", "3")],
        target: Target::Whole,
        examples: &[
            Example { group: "Z4xZ3", conn: "(1,0),(3,0),(0,1),(0,2)", bind: "s=(1,0),t=(0,1)" },
            Example { group: "Z4xZ4", conn: "(1,0),(3,0),(0,1),(0,3)", bind: "s=(1,0),t=(0,1)" },
            Example { group: "Z12", conn: "3,9,1,11", bind: "s=3,t=1" },
        ],
        derive: derive_index_and_r,
    },
    NamedConstruction {
        name: "Hminus-4cyc",
        params: "s, t",
        template: Template::Walk(&[always(
            "((s, t^{n-2}, s, t^{-(n-2)})^{(|s|-2)/2}, s, t^{n-1}, s^{-(|s|-1)}, t^{-(n-1)})",
        )]),
        hypotheses: &[DEG4_ST, Even("|s|"), AtLeast("n", "3")],
        target: Target::Whole,
        examples: &[
            Example { group: "Z4xZ3", conn: "(1,0),(3,0),(0,1),(0,2)", bind: "s=(1,0),t=(0,1)" },
            Example { group: "Z4xZ4", conn: "(1,0),(3,0),(0,1),(0,3)", bind: "s=(1,0),t=(0,1)" },
            Example { group: "Z12", conn: "3,9,1,11", bind: "s=3,t=1" },
        ],
        derive: derive_index_and_r,
    },
    NamedConstruction {
        name: "Ha-odd",
        params: "s, t",
        template: Template::Walk(&[always(
            "(t^{n-1}, s, (s^{|s|-2}, t^{-1}, s^{-(|s|-2)}, t^{-1})^{n/2}#, s^{-1})",
        )]),
        hypotheses: &[DEG4_ST, Odd("|s|"), AtLeast("|s|", "3"), Even("n")],
        target: Target::Whole,
        examples: &[
            Example { group: "Z3xZ4", conn: "(1,0),(2,0),(0,1),(0,3)", bind: "s=(1,0),t=(0,1)" },
            Example { group: "Z5xZ4", conn: "(1,0),(4,0),(0,1),(0,3)", bind: "s=(1,0),t=(0,1)" },
            Example { group: "Z3xZ8", conn: "(1,0),(2,0),(0,1),(0,7)", bind: "s=(1,0),t=(0,1)" },
        ],
        derive: derive_index_and_r,
    },
    NamedConstruction {
        name: "Ha-n2",
        params: "s, t",
        template: Template::Walk(&[always("(t, s^{|s|-1}, t^{-1}, s^{-(|s|-1)})")]),
        hypotheses: &[DEG4_ST, Equal("n", "2")],
        target: Target::Whole,
        examples: &[
            Example { group: "Z12", conn: "2,10,3,9", bind: "s=2,t=3" },
            Example { group: "Z16", conn: "2,14,3,13", bind: "s=2,t=3" },
        ],
        derive: derive_index_and_r,
    },
    NamedConstruction {
        name: "Hminus-odd",
        params: "s, t",
        template: Template::Walk(&[always(
            "((t^{n-3}, s, t^{-(n-3)}, s)^{(|s|-r)/2}, s^{r-1}, t, \
             (t^{n-2}, s^{-1}, t^{-(n-2)}, s^{-1})^{(r-1)/2}, t^{n-3}, s^{-(|s|-r)}, t, s^{|s|-r}, t)",
        )]),
        hypotheses: &[DEG4_ST, Odd("|s|"), AtLeast("n", "4"), Odd("r")],
        target: Target::Whole,
        examples: &[
            Example { group: "Z3xZ4", conn: "(1,0),(2,0),(1,1),(2,3)", bind: "s=(1,0),t=(1,1)" },
            Example { group: "Z5xZ4", conn: "(4,0),(1,0),(1,1),(4,3)", bind: "s=(4,0),t=(1,1)" },
            Example { group: "Z3xZ8", conn: "(2,0),(1,0),(1,1),(2,7)", bind: "s=(2,0),t=(1,1)" },
        ],
        derive: derive_index_and_r,
    },
    NamedConstruction {
        name: "Hplus-odd",
        params: "s, t",
        template: Template::Walk(&[always(
            "((t^{n-1}, s, t^{-(n-1)}, s)^{(|s|-r)/2}, (s^{r-1}, t, s^{-(r-1)}, t)^{n/2})",
        )]),
        hypotheses: &[DEG4_ST, Odd("|s|"), AtLeast("n", "4"), Odd("r")],
        target: Target::Whole,
        examples: &[
            Example { group: "Z3xZ4", conn: "(1,0),(2,0),(1,1),(2,3)", bind: "s=(1,0),t=(1,1)" },
            Example { group: "Z5xZ4", conn: "(4,0),(1,0),(1,1),(4,3)", bind: "s=(4,0),t=(1,1)" },
            Example { group: "Z3xZ8", conn: "(2,0),(1,0),(1,1),(2,7)", bind: "s=(2,0),t=(1,1)" },
        ],
        derive: derive_index_and_r,
    },
    NamedConstruction {
        name: "Hplus-n3",
        params: "s, t",
        template: Template::Walk(&[always(
            "(t^2, s^{|s|-2-r}, t, s^{-(|s|-3)}, t, s^{|s|-2}, t, s^{-r}, t, s)",
        )]),
        hypotheses: &[DEG4_ST, Even("|s|"), Equal("n", "3"), AtLeast("|s|/2", "r")],
        target: Target::Whole,
        examples: &[
            Example { group: "Z4xZ3", conn: "(1,0),(3,0),(0,1),(0,2)", bind: "s=(1,0),t=(0,1)" },
            Example { group: "Z6xZ3", conn: "(1,0),(5,0),(0,1),(0,2)", bind: "s=(1,0),t=(0,1)" },
            Example { group: "Z12", conn: "3,9,1,11", bind: "s=3,t=1" },
        ],
        derive: derive_index_and_r,
    },
    NamedConstruction {
        name: "Hplus-n2-odd",
        params: "s, t",
        template: Template::Walk(&[always("((t, s, t^{-1}, s)^{(|s|-2r)/2}, (s^{r-1}, t, s^{-(r-1)}, t)^2)")]),
        hypotheses: &[DEG4_ST, Equal("n", "2"), Even("|s|"), Odd("r"), Below("r", "|s|/2")],
        target: Target::Whole,
        examples: &[
            Example { group: "Z16", conn: "2,14,3,13", bind: "s=2,t=3" },
            Example { group: "Z20", conn: "2,18,3,17", bind: "s=2,t=3" },
            Example { group: "Z24", conn: "2,22,5,19", bind: "s=2,t=5" },
        ],
        derive: derive_index_and_r,
    },
    NamedConstruction {
        name: "Hminus-n2",
        params: "s, t",
        template: Template::Walk(&[always("(t, s, t^{-2}, s^{r-2}, t^{-1}, s^{-(|s|-3)}, t, s^{|s|-r-2}, t)")]),
        hypotheses: &[DEG4_ST, Equal("n", "2"), Even("|s|-r"), AtLeast("r", "2"), AtLeast("|s|-2", "r")],
        target: Target::Whole,
        examples: &[
            Example { group: "Z10", conn: "2,8,3,7", bind: "s=2,t=3" },
            Example { group: "Z14", conn: "2,12,3,11", bind: "s=2,t=3" },
            Example { group: "Z18", conn: "2,16,3,15", bind: "s=2,t=3" },
        ],
        derive: derive_index_and_r,
    },
    NamedConstruction {
        name: "Hplus-n2",
        params: "s, t",
        template: Template::Walk(&[
            when("r == |s|-2", "(t, s, t^{-1}, s^{|s|-2}, t, s^{-(|s|-3)}, t)"),
            always("(t, s, t^{-1}, s^{r+1}, t^{-1}, s^r, (s, t^{-1}, s, t)^{(|s|-r-2)/2}#)"),
        ]),
        hypotheses: &[DEG4_ST, Equal("n", "2"), Even("|s|-r"), AtLeast("r", "2"), AtLeast("|s|-2", "r")],
        target: Target::Whole,
        examples: &[
            Example { group: "Z10", conn: "2,8,3,7", bind: "s=2,t=3" },
            Example { group: "Z14", conn: "2,12,3,11", bind: "s=2,t=3" },
            Example { group: "Z18", conn: "2,16,3,15", bind: "s=2,t=3" },
        ],
        derive: derive_index_and_r,
    },
    NamedConstruction {
        name: "Mobius2layers-H",
        params: "s (involution), t, u",
        template: Template::Walk(&[always("((s, t)^n#, u, (s, t^{-1})^n#, u)")]),
        hypotheses: &[ConnectionIs(&["s", "t", "u"]), Equal("|s|", "2"), Equal("|u|", "2"), Equal("2n", "|t|")],
        target: Target::Whole,
        examples: &[
            Example { group: "Z2xZ4", conn: "(0,2),(0,1),(0,3),(1,0)", bind: "s=(0,2),t=(0,1),u=(1,0)" },
            Example { group: "Z2xZ6", conn: "(0,3),(0,1),(0,5),(1,0)", bind: "s=(0,3),t=(0,1),u=(1,0)" },
            Example { group: "Z2xZ8", conn: "(0,4),(0,1),(0,7),(1,0)", bind: "s=(0,4),t=(0,1),u=(1,0)" },
        ],
        derive: derive_mobius,
    },
    NamedConstruction {
        name: "Ho",
        params: "s, t, u",
        template: Template::Walk(&[always(
            "(u, s, t, u^-1, t^-1, s, u, t, u^-1, t, u, s^-1, u^-1, s^-1, u, t^-1, u^-1, t^-1)",
        )]),
        hypotheses: &[DEG6_STU],
        target: Target::Block { x: "s", y: "t", a: "3", b: "3" },
        examples: &[
            Example { group: "Z3xZ3xZ2", conn: "(1,0,0),(2,0,0),(0,1,0),(0,2,0),(0,0,1)", bind: "s=(1,0,0),t=(0,1,0),u=(0,0,1)" },
            Example { group: "Z4xZ3xZ2", conn: "(1,0,0),(3,0,0),(0,1,0),(0,2,0),(0,0,1)", bind: "s=(1,0,0),t=(0,1,0),u=(0,0,1)" },
            Example { group: "Z4xZ4xZ2", conn: "(1,0,0),(3,0,0),(0,1,0),(0,3,0),(0,0,1)", bind: "s=(1,0,0),t=(0,1,0),u=(0,0,1)" },
        ],
        derive: derive_block,
    },
    NamedConstruction {
        name: "He",
        params: "s, t, u",
        template: Template::Walk(&[always("(s^2, t^2, s^-2, u, t^-1, u^-1, s, u, t, s, t^-2, s^-2, u^-1)")]),
        hypotheses: &[DEG6_STU],
        target: Target::Block { x: "s", y: "t", a: "3", b: "3" },
        examples: &[
            Example { group: "Z3xZ3xZ2", conn: "(1,0,0),(2,0,0),(0,1,0),(0,2,0),(0,0,1)", bind: "s=(1,0,0),t=(0,1,0),u=(0,0,1)" },
            Example { group: "Z4xZ3xZ2", conn: "(1,0,0),(3,0,0),(0,1,0),(0,2,0),(0,0,1)", bind: "s=(1,0,0),t=(0,1,0),u=(0,0,1)" },
            Example { group: "Z4xZ4xZ2", conn: "(1,0,0),(3,0,0),(0,1,0),(0,3,0),(0,0,1)", bind: "s=(1,0,0),t=(0,1,0),u=(0,0,1)" },
        ],
        derive: derive_block,
    },
    NamedConstruction {
        name: "Cab",
        params: "x, y, u, a, b",
        template: Template::Walk(&[
            when(
                "b - 2*(b//2)",
                "((x^{a-1}, y, x^{-(a-1)}, y)^{(b-1)//2}, x^{a-1}, u, x^{-(a-1)}, \
                 (y^{-1}, x^{a-1}, y^{-1}, x^{-(a-1)})^{(b-1)//2}, u^{-1})",
            ),
            always(
                "((x^{a-1}, y, x^{-(a-1)}, y)^{(b-1)//2}, x^{a-1}, y, x^{-(a-1)}, u, x^{a-1}, y^{-1}, x^{-(a-1)}, \
                 (y^{-1}, x^{a-1}, y^{-1}, x^{-(a-1)})^{(b-1)//2}, u^{-1})",
            ),
        ]),
        hypotheses: &[AtLeast("a", "2"), AtLeast("b", "2")],
        target: Target::Block { x: "x", y: "y", a: "a", b: "b" },
        examples: &[
            Example { group: "Z2xZ2xZ2", conn: "(1,0,0),(0,1,0),(0,0,1)", bind: "x=(1,0,0),y=(0,1,0),u=(0,0,1),a=2,b=2" },
            Example { group: "Z3xZ3xZ2", conn: "(1,0,0),(2,0,0),(0,1,0),(0,2,0),(0,0,1)", bind: "x=(1,0,0),y=(0,1,0),u=(0,0,1),a=3,b=3" },
            Example { group: "Z4xZ4xZ2", conn: "(1,0,0),(3,0,0),(0,1,0),(0,3,0),(0,0,1)", bind: "x=(1,0,0),y=(0,1,0),u=(0,0,1),a=4,b=3" },
        ],
        derive: derive_cab,
    },
    NamedConstruction {
        name: "PrismChords-H",
        params: "s, t, u = t^q",
        template: Template::Walk(&[always(
            "(t^{q-1}, s, t^{-(q-1)}, u, (s^{-1}, t, s, t)^{(|t|-q-1)/2}, s^{-1}, t)",
        )]),
        hypotheses: &[DEG6_STU, Odd("|t|"), Even("q"), AtLeast("q", "2")],
        target: Target::Whole,
        examples: &[
            Example { group: "Z2xZ7", conn: "(1,0),(0,1),(0,6),(0,2),(0,5)", bind: "s=(1,0),t=(0,1),u=(0,2)" },
            Example { group: "Z2xZ7", conn: "(1,0),(0,1),(0,6),(0,4),(0,3)", bind: "s=(1,0),t=(0,1),u=(0,4)" },
            Example { group: "Z14", conn: "7,2,12,4,10", bind: "s=7,t=2,u=4" },
        ],
        derive: derive_prism_chords,
    },
    NamedConstruction {
        name: "PrismChords-Hplus",
        params: "s, t, u = t^q",
        template: Template::Walk(&[always(
            "(s, u, t^{-(q-2)}, s^{-1}, t^{|t|-3}, s, t^{-(|t|-q-2)}, u^{-1}, s^{-1}, t^{-1})",
        )]),
        hypotheses: &[DEG6_STU, AtLeast("q", "2"), AtLeast("|t|-2", "q")],
        target: Target::Whole,
        examples: &[
            Example { group: "Z2xZ7", conn: "(1,0),(0,1),(0,6),(0,2),(0,5)", bind: "s=(1,0),t=(0,1),u=(0,2)" },
            Example { group: "Z2xZ7", conn: "(1,0),(0,1),(0,6),(0,4),(0,3)", bind: "s=(1,0),t=(0,1),u=(0,4)" },
        ],
        derive: derive_prism_chords,
    },
    NamedConstruction {
        name: "PrismChords-Hminus",
        params: "s, t",
        template: Template::Walk(&[always("(t^{|t|-1}, s, t^{-(|t|-1)}, s^{-1})")]),
        hypotheses: &[],
        target: Target::Whole,
        examples: &[
            Example { group: "Z2xZ7", conn: "(1,0),(0,1),(0,6),(0,2),(0,5)", bind: "s=(1,0),t=(0,1),u=(0,2)" },
            Example { group: "Z14", conn: "7,2,12,4,10", bind: "s=7,t=2,u=4" },
            Example { group: "Z2xZ5", conn: "(1,0),(0,1),(0,4)", bind: "s=(1,0),t=(0,1)" },
        ],
        derive: derive_prism_chords,
    },
    NamedConstruction {
        name: "H1H2-odd",
        params: "s, t (generator or cycle t_1..t_n of the subgraph without s)",
        template: Template::Walk(&[always(
            "((t_{n-i+1}^{-1})_{i=1}^{n-r-1+2eps}, \
             (s^{m-1}, t_{r-2i+1}^{-1}, s^{-(m-1)}, t_{r-2i}^{-1})_{i=1}^{eps*(r-2)/2}, \
             s, (s^{m-2})^{eps}, t_1^{-1}, (s^{-(m-2)})^{eps}, \
             (t_{n-2i+2}^{-1}, s^{m-2}, t_{n-2i+1}^{-1}, s^{-(m-2)})_{i=1}^{(n-r-3+2eps)/2}, \
             t_{r+3-2eps}^{-1}, s^{m-2}, (t_2^{-1}, s^{-(m-3)}, t_1^{-1}, s^{m-3})^{1-eps}, s)",
        )]),
        hypotheses: &[AtLeast("|s|", "3"), Odd("n"), AtLeast("n", "3"), Even("r")],
        target: Target::Whole,
        examples: &[
            Example { group: "Z10", conn: "3,7,2,8", bind: "s=3,t=2" },
            Example { group: "Z4xZ3", conn: "(1,0),(3,0),(0,1),(0,2)", bind: "s=(1,0),t=(0,1)" },
            Example { group: "Z4xZ3xZ3", conn: "(1,0,0),(3,0,0),(0,1,0),(0,2,0),(0,0,1),(0,0,2)", bind: "s=(1,0,0)" },
        ],
        derive: derive_quotient_path,
    },
    NamedConstruction {
        name: "deg5-H1",
        params: "s (involution), t, u",
        template: Template::Walk(&[always(
            "(t^{n-1}, u^{p-2}, t^{-(n-3)}, u, t^{n-1}, s, t^{n-1}, u^{-(p-1)}, t, \
             (t^{n-2}, u, t^{-(n-2)}, u)^{(p-1)/2}#, s, t^{-1}, \
             (u^{-1}, t^{n-2}, u^{-1}, t^{-(n-2)})^{(p-3)/2}, u^{-1})",
        )]),
        hypotheses: &[Equal("|s|", "2"), Odd("n"), Odd("p"), AtLeast("p", "3"), AtLeast("n", "3")],
        target: Target::Whole,
        examples: &[
            Example { group: "Z2xZ3xZ3", conn: "(1,0,0),(0,1,0),(0,2,0),(0,0,1),(0,0,2)", bind: "s=(1,0,0),t=(0,1,0),u=(0,0,1)" },
            Example { group: "Z2xZ5xZ5", conn: "(1,0,0),(0,1,0),(0,4,0),(0,0,1),(0,0,4)", bind: "s=(1,0,0),t=(0,1,0),u=(0,0,1)" },
            Example { group: "Z2xZ3xZ9", conn: "(1,0,0),(0,1,0),(0,2,0),(0,0,1),(0,0,8)", bind: "s=(1,0,0),t=(0,1,0),u=(0,0,1)" },
        ],
        derive: derive_deg5,
    },
    NamedConstruction {
        name: "OddHeight-C",
        params: "s, t, u = t^-q",
        template: Template::FlowSum(&[
            always("[t^3](s, (s^{m-2}, t, s^{-(m-2)}, t)^{(|t|-2q)/2}#, s^{-1}, t^{-(|t|-2q-1)})"),
            when(
                "m - 3",
                "[s^{m-1} t^2](t, s^{-1}, t^{-1}, (s^{-(m-5)}, t^{-1}, s^{m-5}, t^{-1})^q#, s, t^{2q-1})",
            ),
            when(
                "q - 3",
                "[t^{-(2q-3)}](t^{-1}, s, t^{q-3}, s, t^{-(q-4)}, u^{-1}, t^{q-4}, \
                 s^{-1}, t^{-(q-4)}, s^{-1}, t^{q-4}, u, t^{-(q-4)})",
            ),
        ]),
        hypotheses: &[DEG6_STU, Odd("m"), AtLeast("m", "3"), Below("2", "q"), Below("2q", "|t|")],
        target: Target::OutsideBlock,
        examples: &[
            Example { group: "Z3xZ8", conn: "(1,0),(2,0),(0,1),(0,7),(0,3),(0,5)", bind: "s=(1,0),t=(0,1),u=(0,5)" },
            Example { group: "Z5xZ8", conn: "(1,0),(4,0),(0,1),(0,7),(0,3),(0,5)", bind: "s=(1,0),t=(0,1),u=(0,5)" },
            Example { group: "Z3xZ12", conn: "(1,0),(2,0),(0,1),(0,11),(0,5),(0,7)", bind: "s=(1,0),t=(0,1),u=(0,7)" },
        ],
        derive: derive_odd_height,
    },
];

pub fn catalog() -> &'static [NamedConstruction] {
    CATALOG
}

pub fn lookup(name: &str) -> Result<&'static NamedConstruction> {
    CATALOG.iter().find(|c| c.name == name).ok_or_else(|| ConstructionError::UnknownName(name.to_string()))
}

// ------------------------------------------------------------ derivations

/// Binding names that denote generators; in a cyclic group an integer
/// binding for one of them is read as an element.
const GENERATOR_NAMES: [&str; 5] = ["s", "t", "u", "x", "y"];

fn gen(b: &Bindings, name: &str) -> Result<GroupElement> {
    match b.get(name) {
        Some(Binding::Gen(g)) => Ok(g.clone()),
        _ => Err(ConstructionError::MissingBinding(name.to_string())),
    }
}

fn order(g: &AbelianGroup, e: &GroupElement) -> i64 {
    g.element_order(e).expect("validated element") as i64
}

fn set_default(b: &mut Bindings, name: &str, v: i64) {
    if b.get(name).is_none() {
        b.set(name, Binding::Int(v));
    }
}

fn violated(what: &str) -> ConstructionError {
    ConstructionError::HypothesisViolated(what.to_string())
}

/// `n = |G|/|s|` and the `r` in `[0, |s|)` with `n·t = r·s`.
fn derive_index_and_r(x: &CayleyGraph, b: &mut Bindings) -> Result<()> {
    let g = x.group();
    let (s, t) = (gen(b, "s")?, gen(b, "t")?);
    let ord_s = order(g, &s);
    let n = x.order() as i64 / ord_s;
    let nt = g.scale(n, &t);
    let r = (0..ord_s).find(|&r| g.scale(r, &s) == nt).ok_or_else(|| violated("t^n in <s>"))?;
    set_default(b, "n", n);
    set_default(b, "r", r);
    Ok(())
}

fn derive_mobius(x: &CayleyGraph, b: &mut Bindings) -> Result<()> {
    let t = gen(b, "t")?;
    set_default(b, "n", order(x.group(), &t) / 2);
    Ok(())
}

fn derive_block(x: &CayleyGraph, b: &mut Bindings) -> Result<()> {
    block(x, b, "s", "t", 3, 3).map(|_| ())
}

fn derive_cab(x: &CayleyGraph, b: &mut Bindings) -> Result<()> {
    let a = eval_expr("a", b, Some(x.group()))?;
    let bb = eval_expr("b", b, Some(x.group()))?;
    block(x, b, "x", "y", a, bb).map(|_| ())
}

fn derive_prism_chords(x: &CayleyGraph, b: &mut Bindings) -> Result<()> {
    let g = x.group();
    let t = gen(b, "t")?;
    if x.order() as i64 != 2 * order(g, &t) {
        return Err(violated("|G : <t>| = 2"));
    }
    if let Ok(u) = gen(b, "u") {
        let q = (0..order(g, &t)).find(|&q| g.scale(q, &t) == u).ok_or_else(|| violated("u in <t>"))?;
        set_default(b, "q", q);
    }
    Ok(())
}

fn derive_odd_height(x: &CayleyGraph, b: &mut Bindings) -> Result<()> {
    let g = x.group();
    let (t, u) = (gen(b, "t")?, gen(b, "u")?);
    let ord_t = order(g, &t);
    let q = (0..ord_t).find(|&q| g.scale(-q, &t) == u).ok_or_else(|| violated("u = t^-q"))?;
    set_default(b, "q", q);
    set_default(b, "m", x.order() as i64 / ord_t);
    block(x, b, "s", "t", 3, 3).map(|_| ())
}

fn derive_deg5(x: &CayleyGraph, b: &mut Bindings) -> Result<()> {
    let g = x.group();
    let (t, u) = (gen(b, "t")?, gen(b, "u")?);
    let sub = g.subgroup_generated(&[t.clone(), u.clone()]).map_err(DslError::from)?;
    let n = order(g, &t);
    if sub.order as i64 == n || sub.order as i64 == order(g, &u) {
        return Err(violated("<t, u> is not cyclic on t or u"));
    }
    set_default(b, "n", n);
    set_default(b, "p", sub.order as i64 / n);
    Ok(())
}

/// For the templates built on a hamiltonian cycle `(t_1, ..., t_n)` of the
/// subgraph `X'` spanned by `S ∖ {s^±1}`: binds the sequence, `m = |G/G'|`,
/// `n`, the `r` with `t_1 ⋯ t_r = s^-m`, and `eps = [r ≠ 0]`. When `n` is odd
/// and `r` comes out odd the cycle is reversed, which makes `r` even.
fn derive_quotient_path(x: &CayleyGraph, b: &mut Bindings) -> Result<()> {
    let g = x.group();
    let s = gen(b, "s")?;
    let rest: Vec<GroupElement> =
        x.conn().elements().iter().filter(|e| **e != s && **e != g.neg(&s)).cloned().collect();
    if rest.is_empty() {
        return Err(violated("S has generators besides s"));
    }
    let sub = g.subgroup_generated(&rest).map_err(DslError::from)?;
    let m = sub.index as i64;
    let mut steps = match b.get("t") {
        Some(Binding::Gen(t)) => vec![t.clone(); sub.order as usize],
        Some(Binding::Seq(seq)) => seq.clone(),
        _ => subgroup_hamiltonian_cycle(x, &rest, sub.order as usize)
            .ok_or_else(|| violated("the subgraph without s has a hamiltonian cycle"))?,
    };
    let target = g.scale(-m, &s);
    let find_r = |steps: &[GroupElement]| {
        let mut acc = g.identity();
        (0..steps.len()).find(|&r| {
            if r > 0 {
                acc = g.add(&acc, &steps[r - 1]);
            }
            acc == target
        })
    };
    let mut r = find_r(&steps).ok_or_else(|| violated("s^-m lies on the cycle of X'"))?;
    if r % 2 == 1 && steps.len() % 2 == 1 {
        steps = steps.iter().rev().map(|e| g.neg(e)).collect();
        r = find_r(&steps).expect("reversal keeps every vertex");
    }
    set_default(b, "m", m);
    set_default(b, "n", steps.len() as i64);
    set_default(b, "r", r as i64);
    set_default(b, "eps", i64::from(r != 0));
    b.set("t", Binding::Seq(steps));
    Ok(())
}

/// Steps of a hamiltonian cycle through the identity of the subgraph on
/// `⟨gens⟩` using only `±gens`, by plain depth-first search.
pub fn subgroup_hamiltonian_cycle(x: &CayleyGraph, gens: &[GroupElement], size: usize) -> Option<Vec<GroupElement>> {
    let g = x.group();
    let mut steps: Vec<GroupElement> = gens.to_vec();
    for e in gens {
        let inv = g.neg(e);
        if !steps.contains(&inv) {
            steps.push(inv);
        }
    }
    fn dfs(
        g: &AbelianGroup,
        steps: &[GroupElement],
        size: usize,
        path: &mut Vec<GroupElement>,
        used: &mut Vec<usize>,
        on: &mut BTreeSet<GroupElement>,
        cur: &GroupElement,
    ) -> bool {
        if path.len() == size {
            return cur.is_identity();
        }
        for (k, st) in steps.iter().enumerate() {
            let next = g.add(cur, st);
            let closing = path.len() + 1 == size && next.is_identity();
            if closing || !on.contains(&next) {
                path.push(st.clone());
                used.push(k);
                on.insert(next.clone());
                if dfs(g, steps, size, path, used, on, &next) {
                    return true;
                }
                if !closing {
                    on.remove(&next);
                }
                used.pop();
                path.pop();
            }
        }
        false
    }
    if size < 3 {
        return None;
    }
    let mut path = Vec::new();
    let mut on = BTreeSet::from([g.identity()]);
    dfs(g, &steps, size, &mut path, &mut Vec::new(), &mut on, &g.identity()).then_some(path)
}

/// Vertex indices `x^i y^j u^k`, `i < a`, `j < b`, `k < 2`; errors unless
/// they are all distinct.
fn block(x: &CayleyGraph, b: &Bindings, xn: &str, yn: &str, a: i64, bb: i64) -> Result<Vec<usize>> {
    let g = x.group();
    let (gx, gy, gu) = (gen(b, xn)?, gen(b, yn)?, gen(b, "u")?);
    let mut out = BTreeSet::new();
    for i in 0..a {
        for j in 0..bb {
            for k in 0..2 {
                let e = g.add(&g.add(&g.scale(i, &gx), &g.scale(j, &gy)), &g.scale(k, &gu));
                out.insert(x.index(&e));
            }
        }
    }
    if out.len() as i64 != 2 * a * bb {
        return Err(violated("block elements are distinct"));
    }
    Ok(out.into_iter().collect())
}

// ------------------------------------------------------------ realization

impl NamedConstruction {
    /// Bindings after derived parameters are filled in.
    pub fn complete_bindings(&self, x: &CayleyGraph, bindings: &Bindings) -> Result<Bindings> {
        let mut b = bindings.clone();
        let g = x.group();
        if g.rank() == 1 {
            for name in GENERATOR_NAMES {
                if let Some(Binding::Int(v)) = b.get(name) {
                    let e = g.reduce(&[*v]).map_err(DslError::from)?;
                    b.set(name, Binding::Gen(e));
                }
            }
        }
        (self.derive)(x, &mut b)?;
        Ok(b)
    }

    pub fn check_hypotheses(&self, x: &CayleyGraph, b: &Bindings) -> Result<()> {
        let g = x.group();
        let ev = |e: &str| eval_expr(e, b, Some(g));
        for h in self.hypotheses {
            let ok = match h {
                ConnectionIs(names) => {
                    let mut want = BTreeSet::new();
                    for n in *names {
                        let e = gen(b, n)?;
                        want.insert(g.neg(&e));
                        want.insert(e);
                    }
                    let have: BTreeSet<GroupElement> = x.conn().elements().iter().cloned().collect();
                    want == have && want.len() == x.degree()
                }
                Even(e) => ev(e)?.rem_euclid(2) == 0,
                Odd(e) => ev(e)?.rem_euclid(2) == 1,
                AtLeast(a, c) => ev(a)? >= ev(c)?,
                Below(a, c) => ev(a)? < ev(c)?,
                Equal(a, c) => ev(a)? == ev(c)?,
            };
            if !ok {
                return Err(ConstructionError::HypothesisViolated(h.to_string()));
            }
        }
        Ok(())
    }

    fn guard_holds(&self, x: &CayleyGraph, b: &Bindings, p: &Piece) -> Result<bool> {
        match p.guard {
            None => Ok(true),
            Some(text) if text.contains("==") => {
                let (l, r) = text.split_once("==").expect("checked");
                Ok(eval_expr(l.trim(), b, Some(x.group()))? == eval_expr(r.trim(), b, Some(x.group()))?)
            }
            Some(text) => Ok(eval_expr(text, b, Some(x.group()))? != 0),
        }
    }

    /// The expanded walk before any verification.
    pub fn expand(&self, x: &CayleyGraph, b: &Bindings) -> Result<Walk> {
        let g = x.group();
        match self.template {
            Template::Walk(pieces) => {
                for p in pieces {
                    if self.guard_holds(x, b, p)? {
                        return Ok(expand_text(p.text, b, g)?);
                    }
                }
                Err(violated("some template case applies"))
            }
            Template::FlowSum(pieces) => {
                let mut total = Flow::zero(x);
                for p in pieces {
                    if self.guard_holds(x, b, p)? {
                        let w = expand_text(p.text, b, g)?;
                        total = total.checked_add(&walk_flow(x, &w)?)?;
                    }
                }
                flow_to_cycle(x, &total).ok_or_else(|| ConstructionError::NotHamiltonianBug {
                    name: self.name.to_string(),
                    walk: "flow sum is not a single cycle".to_string(),
                })
            }
        }
    }

    pub fn target_vertices(&self, x: &CayleyGraph, b: &Bindings) -> Result<Vec<usize>> {
        match self.target {
            Target::Whole => Ok((0..x.order()).collect()),
            Target::Block { x: xn, y: yn, a, b: bb } => {
                let a = eval_expr(a, b, Some(x.group()))?;
                let bb = eval_expr(bb, b, Some(x.group()))?;
                block(x, b, xn, yn, a, bb)
            }
            Target::OutsideBlock => {
                let inside: BTreeSet<usize> = block(x, b, "s", "t", 3, 3)?.into_iter().collect();
                Ok((0..x.order()).filter(|v| !inside.contains(v)).collect())
            }
        }
    }
}

/// Expands a catalog entry and checks that the result is a hamiltonian cycle
/// of its target vertex set.
pub fn named_cycle(name: &str, x: &CayleyGraph, bindings: &Bindings) -> Result<Walk> {
    realize(lookup(name)?, x, bindings).map(|(w, _)| w)
}

/// Like [`named_cycle`], also returning the completed bindings.
pub fn realize(c: &NamedConstruction, x: &CayleyGraph, bindings: &Bindings) -> Result<(Walk, Bindings)> {
    let b = c.complete_bindings(x, bindings)?;
    c.check_hypotheses(x, &b)?;
    let w = c.expand(x, &b)?;
    let target = c.target_vertices(x, &b)?;
    let bug = || ConstructionError::NotHamiltonianBug { name: c.name.to_string(), walk: w.render(x.group()) };
    let verts = walk_vertices(x, &w).map_err(|_| bug())?;
    let kind = classify_walk(x, &w)?;
    let covered: BTreeSet<usize> = verts.iter().copied().collect();
    let ok = matches!(kind, WalkKind::Cycle | WalkKind::HamiltonianCycle)
        && w.len() == target.len()
        && covered == target.iter().copied().collect();
    if !ok {
        return Err(bug());
    }
    Ok((w, b))
}

/// The walk along a flow that is a single simple cycle with unit edge
/// values, started at its least vertex.
pub fn flow_to_cycle(x: &CayleyGraph, f: &Flow) -> Option<Walk> {
    let n = x.order();
    let mut next = vec![None; n];
    for v in 0..n {
        for k in 0..x.degree() {
            match f.edge_flow(x, v, k) {
                1 => {
                    if next[v].replace(x.step(v, k)).is_some() {
                        return None;
                    }
                }
                0 | -1 => {}
                _ => return None,
            }
        }
    }
    let start = (0..n).find(|&v| next[v].is_some())?;
    let mut verts = vec![start];
    let mut cur = next[start]?;
    while cur != start {
        if verts.len() > n {
            return None;
        }
        verts.push(cur);
        cur = next[cur]?;
    }
    if verts.len() != next.iter().flatten().count() {
        return None;
    }
    verts.push(start);
    let w = Walk::from_vertices(x, &verts);
    (walk_flow(x, &w).ok()? == *f).then_some(w)
}

// ---------------------------------------------------------------- surgery

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SurgeryKind {
    /// Path `[v](x, y, x^-1)` and edge `[v x z](y)`.
    Sum,
    /// Path `[w](x, y, x^-1)` and edge `[w x y z](y^-1)`.
    Difference,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgerySpec {
    pub kind: SurgeryKind,
    pub anchor: GroupElement,
    pub x: GroupElement,
    pub y: GroupElement,
    pub z: GroupElement,
}

#[derive(Debug, Clone)]
pub struct SurgeryOutcome {
    pub surgered: Walk,
    /// `H - H'`.
    pub delta: Flow,
    /// `[a](x, y, x^-1, y^-1) ± [a x](z, y, z^-1, y^-1)` for the anchor `a`.
    pub predicted: Flow,
    /// `delta` translated so the anchor sits at the identity.
    pub normalized: Flow,
}

impl SurgeryOutcome {
    pub fn identity_holds(&self) -> bool {
        self.delta == self.predicted
    }
}

/// Basic 4-cycle `[v](a, b, a^-1, b^-1)` as a flow.
pub fn square(x: &CayleyGraph, v: &GroupElement, a: &GroupElement, b: &GroupElement) -> Result<Flow> {
    let g = x.group();
    let w = Walk { base: v.clone(), steps: vec![a.clone(), b.clone(), g.neg(a), g.neg(b)] };
    Ok(walk_flow(x, &w)?)
}

pub fn lemma4c_surgery(x: &CayleyGraph, h: &Walk, spec: &SurgerySpec) -> Result<SurgeryOutcome> {
    let g = x.group();
    if classify_walk(x, h)? != WalkKind::HamiltonianCycle {
        return Err(ConstructionError::SurgeryNotSimple("input is not a hamiltonian cycle".into()));
    }
    let SurgerySpec { kind, anchor: a, x: gx, y: gy, z: gz } = spec;
    for e in [gx, gy, gz] {
        if !x.conn().contains(e) {
            return Err(DslError::StepNotInS(g.render_element(e)).into());
        }
    }
    let mut cyc = walk_vertices(x, h)?;
    cyc.pop();
    let n = cyc.len();
    let pos = |v: usize| cyc.iter().position(|&c| c == v);
    let idx = |e: &GroupElement| x.index(e);
    let ax = g.add(a, gx);
    let axy = g.add(&ax, gy);
    let ay = g.add(a, gy);
    let path_text = format!(
        "[{}]({},{},{})",
        g.render_element(a),
        g.render_element(gx),
        g.render_element(gy),
        g.render_element(&g.neg(gx))
    );
    let i = pos(idx(a)).ok_or_else(|| ConstructionError::MissingPath(path_text.clone()))?;
    let path_ok = (1..=3).all(|k| cyc[(i + k) % n] == [idx(&ax), idx(&axy), idx(&ay)][k - 1]);
    if !path_ok {
        return Err(ConstructionError::MissingPath(path_text));
    }
    // The edge to reroute through (ax, axy), in the cycle's orientation.
    let (tail, head, inserted) = match kind {
        SurgeryKind::Sum => {
            let tail = g.add(&ax, gz);
            let head = g.add(&tail, gy);
            (tail, head, [idx(&ax), idx(&axy)])
        }
        SurgeryKind::Difference => {
            let tail = g.add(&axy, gz);
            let head = g.sub(&tail, gy);
            (tail, head, [idx(&axy), idx(&ax)])
        }
    };
    let edge_text = format!(
        "[{}]({})",
        g.render_element(&tail),
        g.render_element(&g.sub(&head, &tail))
    );
    let j = pos(idx(&tail)).ok_or_else(|| ConstructionError::MissingEdge(edge_text.clone()))?;
    if cyc[(j + 1) % n] != idx(&head) {
        return Err(ConstructionError::MissingEdge(edge_text));
    }
    let mut out: Vec<usize> = Vec::with_capacity(n);
    for (k, &v) in cyc.iter().enumerate() {
        if k == (i + 1) % n || k == (i + 2) % n {
            continue;
        }
        out.push(v);
        if k == j {
            out.extend(inserted);
        }
    }
    let rot = out.iter().position(|&v| v == cyc[0]).expect("base vertex kept");
    out.rotate_left(rot);
    out.push(out[0]);
    if out.len() != n + 1 || out.windows(2).any(|p| x.gen_between(p[0], p[1]).is_none()) {
        return Err(ConstructionError::SurgeryNotSimple("rerouted walk leaves the graph".into()));
    }
    let surgered = Walk::from_vertices(x, &out);
    if classify_walk(x, &surgered)? != WalkKind::HamiltonianCycle {
        return Err(ConstructionError::SurgeryNotSimple(surgered.render(g)));
    }
    let delta = walk_flow(x, h)?.checked_sub(&walk_flow(x, &surgered)?)?;
    let first = square(x, a, gx, gy)?;
    let second = square(x, &ax, gz, gy)?;
    let predicted = match kind {
        SurgeryKind::Sum => first.checked_add(&second)?,
        SurgeryKind::Difference => first.checked_sub(&second)?,
    };
    let normalized = crate::flows::translate_flow(x, &g.neg(a), &delta);
    Ok(SurgeryOutcome { surgered, delta, predicted, normalized })
}

/// Tries every anchor in turn and returns the first surgery that applies.
pub fn find_surgery(
    x: &CayleyGraph,
    h: &Walk,
    kind: SurgeryKind,
    gx: &GroupElement,
    gy: &GroupElement,
    gz: &GroupElement,
) -> Option<(SurgerySpec, SurgeryOutcome)> {
    x.group().elements().find_map(|anchor| {
        let spec = SurgerySpec { kind, anchor, x: gx.clone(), y: gy.clone(), z: gz.clone() };
        lemma4c_surgery(x, h, &spec).ok().map(|o| (spec, o))
    })
}

// ---------------------------------------------------------- decompositions

/// The unit squares of the `dims[0] x dims[1] x dims[2]` block on the
/// generators `gens`, as flows `[v](a, b, a^-1, b^-1)`.
pub fn block_faces(x: &CayleyGraph, gens: [&GroupElement; 3], dims: [i64; 3]) -> Result<Vec<Flow>> {
    let g = x.group();
    let mut out = Vec::new();
    for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    let c = [i, j, k];
                    if c[p] + 1 >= dims[p] || c[q] + 1 >= dims[q] {
                        continue;
                    }
                    let v = (0..3).fold(g.identity(), |acc, d| g.add(&acc, &g.scale(c[d], gens[d])));
                    out.push(square(x, &v, gens[p], gens[q])?);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Coefficient on each face, in the order given.
    pub coeffs: Vec<i64>,
    /// Number of squares counted with multiplicity.
    pub size: i64,
}

/// Writes `f` as an integer combination of `faces`, minimizing the total
/// number of squares over kernel shifts with coefficients in
/// `[-radius, radius]`. The result is re-verified.
pub fn decompose(x: &CayleyGraph, f: &Flow, faces: &[Flow], radius: i64) -> Result<Decomposition> {
    let rows: Vec<Vec<i64>> = faces.iter().map(|q| q.coeffs.clone()).collect();
    let m = IntegerMatrix::from_rows(x.edge_count(), &rows)?;
    let b: Vec<BigInt> = f.coeffs.iter().map(|&c| BigInt::from(c)).collect();
    let base = solve(&m, &b)?.ok_or(ConstructionError::NoDecomposition)?;
    let kernel = left_kernel(&m);
    let to_i64 = |v: &BigInt| v.to_i64().ok_or(ConstructionError::NoDecomposition);
    let base: Vec<i64> = base.iter().map(to_i64).collect::<Result<_>>()?;
    let kern: Vec<Vec<i64>> =
        kernel.rows().iter().map(|r| r.iter().map(to_i64).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    let k = kern.len();
    let width = (2 * radius + 1) as usize;
    let combos = width.checked_pow(k as u32).ok_or(ConstructionError::NoDecomposition)?;
    let mut best: Option<Vec<i64>> = None;
    for code in 0..combos {
        let mut c = base.clone();
        let mut rest = code;
        for kv in &kern {
            let mult = (rest % width) as i64 - radius;
            rest /= width;
            if mult != 0 {
                for (ci, ki) in c.iter_mut().zip(kv) {
                    *ci += mult * ki;
                }
            }
        }
        let size: i64 = c.iter().map(|v| v.abs()).sum();
        if best.as_ref().is_none_or(|b| size < b.iter().map(|v| v.abs()).sum()) {
            best = Some(c);
        }
    }
    let coeffs = best.ok_or(ConstructionError::NoDecomposition)?;
    let mut check = Flow::zero(x);
    for (c, q) in coeffs.iter().zip(faces) {
        check = check.checked_add(&q.checked_scale(*c)?)?;
    }
    if check != *f {
        return Err(ConstructionError::NoDecomposition);
    }
    let size = coeffs.iter().map(|v| v.abs()).sum();
    Ok(Decomposition { coeffs, size })
}

/// The lattice spanned by every basic 4-cycle, in edge coordinates.
pub fn basic_square_lattice(x: &CayleyGraph) -> Result<RowLattice> {
    let g = x.group();
    let gens = x.conn().elements();
    let mut lat = RowLattice::new(x.edge_count());
    for v in g.elements() {
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                if *b != g.neg(a) {
                    lat.insert(&square(x, &v, a, b)?.coeffs)?;
                }
            }
        }
    }
    Ok(lat)
}

/// Whether `f` is an integer combination of basic 4-cycles.
pub fn is_sum_of_basic_squares(x: &CayleyGraph, f: &Flow) -> Result<bool> {
    let lat = basic_square_lattice(x)?;
    Ok(lat.contains(&f.coeffs)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(group: &str, conn: &str) -> CayleyGraph {
        CayleyGraph::parse(group, conn).unwrap()
    }

    fn binds(x: &CayleyGraph, text: &str) -> Bindings {
        Bindings::parse(x.group(), text).unwrap()
    }


    #[test]
    fn every_fixture_realizes() {
        let mut failures = Vec::new();
        for c in catalog() {
            for ex in c.examples {
                let x = graph(ex.group, ex.conn);
                if let Err(e) = named_cycle(c.name, &x, &binds(&x, ex.bind)) {
                    failures.push(format!("{} on {} {{{}}}: {e}", c.name, ex.group, ex.conn));
                }
            }
        }
        assert!(failures.is_empty(), "{}", failures.join("\n"));
    }

    #[test]
    fn every_entry_has_examples() {
        for c in catalog() {
            assert!((2..=3).contains(&c.examples.len()), "{}", c.name);
        }
    }

    fn el(x: &CayleyGraph, text: &str) -> GroupElement {
        x.group().parse_element(text).unwrap()
    }

    fn block_faces_of(x: &CayleyGraph) -> Vec<Flow> {
        let (s, t, u) = (el(x, "(1,0,0)"), el(x, "(0,1,0)"), el(x, "(0,0,1)"));
        block_faces(x, [&s, &t, &u], [3, 3, 2]).unwrap()
    }

    #[test]
    fn ho_and_he_square_counts() {
        for group in ["Z3xZ3xZ2", "Z4xZ4xZ2"] {
            let conn = if group.starts_with("Z3") {
                "(1,0,0),(2,0,0),(0,1,0),(0,2,0),(0,0,1)"
            } else {
                "(1,0,0),(3,0,0),(0,1,0),(0,3,0),(0,0,1)"
            };
            let x = graph(group, conn);
            let b = binds(&x, "s=(1,0,0),t=(0,1,0),u=(0,0,1)");
            let faces = block_faces_of(&x);
            assert_eq!(faces.len(), 20);
            let ho = walk_flow(&x, &named_cycle("Ho", &x, &b).unwrap()).unwrap();
            let he = walk_flow(&x, &named_cycle("He", &x, &b).unwrap()).unwrap();
            assert_eq!(decompose(&x, &ho, &faces, 3).unwrap().size, 9, "{group}");
            assert_eq!(decompose(&x, &he, &faces, 3).unwrap().size, 8, "{group}");
        }
    }

    #[test]
    fn ho_and_he_cover_the_block() {
        let x = graph("Z3xZ3xZ2", "(1,0,0),(2,0,0),(0,1,0),(0,2,0),(0,0,1)");
        let b = binds(&x, "s=(1,0,0),t=(0,1,0),u=(0,0,1)");
        assert_eq!(named_cycle("Ho", &x, &b).unwrap().len(), 18);
        assert_eq!(named_cycle("He", &x, &b).unwrap().len(), 18);
    }

    /// (entry, group, conn, bindings, kind, x, y, z)
    const SURGERIES: &[(&str, &str, &str, &str, SurgeryKind, &str, &str, &str)] = &[
        ("Ha-odd", "Z3xZ4", "(1,0),(2,0),(0,1),(0,3)", "s=(1,0),t=(0,1)", SurgeryKind::Difference, "(1,0)", "(0,3)", "(1,0)"),
        ("Ha-n2", "Z12", "2,10,3,9", "s=2,t=3", SurgeryKind::Difference, "2", "9", "2"),
        ("Hminus-odd", "Z3xZ4", "(1,0),(2,0),(1,1),(2,3)", "s=(1,0),t=(1,1)", SurgeryKind::Difference, "(1,1)", "(1,0)", "(1,1)"),
        ("Hminus-odd", "Z5xZ4", "(4,0),(1,0),(1,1),(4,3)", "s=(4,0),t=(1,1)", SurgeryKind::Difference, "(1,1)", "(4,0)", "(1,1)"),
        ("Hplus-odd", "Z3xZ4", "(1,0),(2,0),(1,1),(2,3)", "s=(1,0),t=(1,1)", SurgeryKind::Sum, "(1,1)", "(1,0)", "(1,1)"),
        ("Hplus-odd", "Z3xZ8", "(2,0),(1,0),(1,1),(2,7)", "s=(2,0),t=(1,1)", SurgeryKind::Sum, "(1,1)", "(2,0)", "(1,1)"),
        ("Hminus-4cyc", "Z4xZ4", "(1,0),(3,0),(0,1),(0,3)", "s=(1,0),t=(0,1)", SurgeryKind::Difference, "(0,1)", "(1,0)", "(0,1)"),
        ("Hstar", "Z4xZ4", "(1,0),(3,0),(0,1),(0,3)", "s=(1,0),t=(0,1)", SurgeryKind::Sum, "(0,3)", "(1,0)", "(0,3)"),
        ("Hplus-n3", "Z4xZ3", "(1,0),(3,0),(0,1),(0,2)", "s=(1,0),t=(0,1)", SurgeryKind::Sum, "(3,0)", "(0,1)", "(3,0)"),
        ("Hplus-n3", "Z12", "3,9,1,11", "s=3,t=1", SurgeryKind::Sum, "9", "1", "9"),
        ("Hplus-n2-odd", "Z16", "2,14,3,13", "s=2,t=3", SurgeryKind::Sum, "2", "3", "2"),
        ("Hminus-n2", "Z10", "2,8,3,7", "s=2,t=3", SurgeryKind::Difference, "3", "2", "3"),
        ("Hplus-n2", "Z10", "2,8,3,7", "s=2,t=3", SurgeryKind::Sum, "3", "2", "3"),
        ("Hplus-n2", "Z14", "2,12,3,11", "s=2,t=3", SurgeryKind::Sum, "3", "2", "3"),
        ("PrismChords-Hplus", "Z2xZ7", "(1,0),(0,1),(0,6),(0,2),(0,5)", "s=(1,0),t=(0,1),u=(0,2)", SurgeryKind::Sum, "(0,1)", "(1,0)", "(0,1)"),
        ("PrismChords-Hminus", "Z2xZ7", "(1,0),(0,1),(0,6),(0,2),(0,5)", "s=(1,0),t=(0,1),u=(0,2)", SurgeryKind::Difference, "(0,1)", "(1,0)", "(0,1)"),
    ];

    #[test]
    fn surgeries_apply_with_exact_flow_identity() {
        let mut failures = Vec::new();
        for (name, group, conn, b, kind, gx, gy, gz) in SURGERIES {
            let x = graph(group, conn);
            let h = named_cycle(name, &x, &binds(&x, b)).unwrap();
            match find_surgery(&x, &h, *kind, &el(&x, gx), &el(&x, gy), &el(&x, gz)) {
                Some((_, out)) => {
                    assert!(out.identity_holds(), "{name} on {group}");
                    assert_eq!(classify_walk(&x, &out.surgered).unwrap(), WalkKind::HamiltonianCycle);
                }
                None => failures.push(format!("{name} on {group} {kind:?}")),
            }
        }
        assert!(failures.is_empty(), "{}", failures.join("\n"));
    }

    #[test]
    fn sum_and_difference_deltas_add_to_twice_the_square() {
        let x = graph("Z10", "2,8,3,7");
        let b = binds(&x, "s=2,t=3");
        let (t, s) = (el(&x, "3"), el(&x, "2"));
        let (_, plus) = find_surgery(&x, &named_cycle("Hplus-n2", &x, &b).unwrap(), SurgeryKind::Sum, &t, &s, &t).unwrap();
        let (_, minus) =
            find_surgery(&x, &named_cycle("Hminus-n2", &x, &b).unwrap(), SurgeryKind::Difference, &t, &s, &t).unwrap();
        let twice = square(&x, &x.group().identity(), &t, &s).unwrap().checked_scale(2).unwrap();
        assert_eq!(plus.normalized.checked_add(&minus.normalized).unwrap(), twice);
    }

    #[test]
    fn surgery_reports_missing_path() {
        let x = graph("Z10", "2,8,3,7");
        let h = named_cycle("Hplus-n2", &x, &binds(&x, "s=2,t=3")).unwrap();
        let spec = SurgerySpec {
            kind: SurgeryKind::Sum,
            anchor: el(&x, "0"),
            x: el(&x, "2"),
            y: el(&x, "2"),
            z: el(&x, "2"),
        };
        assert!(matches!(lemma4c_surgery(&x, &h, &spec), Err(ConstructionError::MissingPath(_))));
    }

    fn quotient_cycle_flow(x: &CayleyGraph, b: &Bindings) -> Flow {
        let Some(Binding::Seq(steps)) = b.get("t") else { panic!("t bound to a sequence") };
        walk_flow(x, &Walk { base: x.group().identity(), steps: steps.clone() }).unwrap()
    }

    #[test]
    fn odd_quotient_pair_differs_by_squares_and_twice_the_subcycle() {
        let cases = [
            ("Z10", "3,7,2,8", "s=3,t=2"),
            ("Z4xZ3", "(1,0),(3,0),(0,1),(0,2)", "s=(1,0),t=(0,1)"),
            ("Z4xZ3xZ3", "(1,0,0),(3,0,0),(0,1,0),(0,2,0),(0,0,1),(0,0,2)", "s=(1,0,0)"),
        ];
        for (group, conn, b) in cases {
            let x = graph(group, conn);
            let (h1, full) = realize(lookup("H1H2-odd").unwrap(), &x, &binds(&x, b)).unwrap();
            let h2 = lookup("E=H+2F-even").unwrap().expand(&x, &full).unwrap();
            assert_eq!(classify_walk(&x, &h2).unwrap(), WalkKind::HamiltonianCycle, "{group}");
            let combo = walk_flow(&x, &h1)
                .unwrap()
                .checked_sub(&walk_flow(&x, &h2).unwrap())
                .unwrap()
                .checked_add(&quotient_cycle_flow(&x, &full).checked_scale(2).unwrap())
                .unwrap();
            assert!(is_sum_of_basic_squares(&x, &combo).unwrap(), "{group}");
        }
    }

    #[test]
    fn degree_five_cycle_differs_by_squares_from_twice_the_t_cycle() {
        for (group, conn) in [
            ("Z2xZ3xZ3", "(1,0,0),(0,1,0),(0,2,0),(0,0,1),(0,0,2)"),
            ("Z2xZ5xZ5", "(1,0,0),(0,1,0),(0,4,0),(0,0,1),(0,0,4)"),
            ("Z2xZ3xZ9", "(1,0,0),(0,1,0),(0,2,0),(0,0,1),(0,0,8)"),
        ] {
            let x = graph(group, conn);
            let (h1, full) = realize(lookup("deg5-H1").unwrap(), &x, &binds(&x, "s=(1,0,0),t=(0,1,0),u=(0,0,1)")).unwrap();
            let Some(Binding::Gen(t)) = full.get("t") else { panic!() };
            let n = eval_expr("n", &full, None).unwrap() as usize;
            let tcycle = walk_flow(&x, &Walk { base: x.group().identity(), steps: vec![t.clone(); n] }).unwrap();
            let combo = walk_flow(&x, &h1).unwrap().checked_sub(&tcycle.checked_scale(2).unwrap()).unwrap();
            assert!(is_sum_of_basic_squares(&x, &combo).unwrap(), "{group}");
        }
    }

    #[test]
    fn violated_hypothesis_is_named() {
        let x = graph("Z3xZ4", "(1,0),(2,0),(0,1),(0,3)");
        let err = named_cycle("Hstar", &x, &binds(&x, "s=(1,0),t=(0,1)")).unwrap_err();
        assert_eq!(err, ConstructionError::HypothesisViolated("|s| even".into()));
    }

    #[test]
    fn flow_to_cycle_inverts_walk_flow() {
        let x = graph("Z4xZ4", "(1,0),(3,0),(0,1),(0,3)");
        let h = named_cycle("Hstar", &x, &binds(&x, "s=(1,0),t=(0,1)")).unwrap();
        let f = walk_flow(&x, &h).unwrap();
        assert_eq!(walk_flow(&x, &flow_to_cycle(&x, &f).unwrap()).unwrap(), f);
        assert!(flow_to_cycle(&x, &f.checked_scale(2).unwrap()).is_none());
    }
}

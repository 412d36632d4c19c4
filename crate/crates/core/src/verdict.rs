//! The seven stability properties and their implication graph.

use serde::{Deserialize, Serialize};

/// Property identifiers in the order (i) to (vii).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    UniformExp,
    PseudoUniformExp,
    StrongExp,
    PseudoStrongExp,
    Superpoly,
    Uniform,
    Strong,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::UniformExp,
        Property::PseudoUniformExp,
        Property::StrongExp,
        Property::PseudoStrongExp,
        Property::Superpoly,
        Property::Uniform,
        Property::Strong,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn roman(self) -> &'static str {
        ["i", "ii", "iii", "iv", "v", "vi", "vii"][self.index()]
    }

    pub fn name(self) -> &'static str {
        match self {
            Property::UniformExp => "uniformly exponentially stable",
            Property::PseudoUniformExp => "pseudo uniformly exponentially stable",
            Property::StrongExp => "strongly exponentially stable",
            Property::PseudoStrongExp => "pseudo strongly exponentially stable",
            Property::Superpoly => "super polynomially stable",
            Property::Uniform => "uniformly stable",
            Property::Strong => "strongly stable",
        }
    }
}

/// Unconditional implications `(from, to)`.
pub const IMPLICATIONS: [(Property, Property); 6] = [
    (Property::UniformExp, Property::PseudoUniformExp),
    (Property::UniformExp, Property::StrongExp),
    (Property::PseudoUniformExp, Property::PseudoStrongExp),
    (Property::StrongExp, Property::PseudoStrongExp),
    (Property::Superpoly, Property::Uniform),
    (Property::Uniform, Property::Strong),
];

/// `(iv) => (v)`, valid on Mackey complete barrelled spaces for
/// exponentially bounded semigroups.
pub const CONDITIONAL_IMPLICATION: (Property, Property) = (Property::PseudoStrongExp, Property::Superpoly);

/// One boolean per property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub uniform_exp: bool,
    pub pseudo_uniform_exp: bool,
    pub strong_exp: bool,
    pub pseudo_strong_exp: bool,
    pub superpoly: bool,
    pub uniform: bool,
    pub strong: bool,
}

impl Verdicts {
    pub fn all(v: bool) -> Self {
        Self::from_array([v; 7])
    }

    pub fn from_array(a: [bool; 7]) -> Self {
        Self {
            uniform_exp: a[0],
            pseudo_uniform_exp: a[1],
            strong_exp: a[2],
            pseudo_strong_exp: a[3],
            superpoly: a[4],
            uniform: a[5],
            strong: a[6],
        }
    }

    pub fn to_array(self) -> [bool; 7] {
        [
            self.uniform_exp,
            self.pseudo_uniform_exp,
            self.strong_exp,
            self.pseudo_strong_exp,
            self.superpoly,
            self.uniform,
            self.strong,
        ]
    }

    pub fn get(self, p: Property) -> bool {
        self.to_array()[p.index()]
    }

    pub fn set(&mut self, p: Property, v: bool) {
        let mut a = self.to_array();
        a[p.index()] = v;
        *self = Self::from_array(a);
    }

    /// Compact `TTFF...` form.
    pub fn code(self) -> String {
        self.to_array().iter().map(|&b| if b { 'T' } else { 'F' }).collect()
    }

    /// Parses a seven-letter `T`/`F` code.
    pub fn from_code(code: &str) -> Option<Self> {
        let v: Vec<bool> = code
            .chars()
            .map(|c| match c {
                'T' => Some(true),
                'F' => Some(false),
                _ => None,
            })
            .collect::<Option<_>>()?;
        Some(Self::from_array(v.try_into().ok()?))
    }
}

/// Result of checking verdicts against the implication graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyCheck {
    pub consistent: bool,
    pub violations: Vec<String>,
    /// Edges that hold as implications for these verdicts but are not
    /// reversible here: `from` false while `to` true.
    pub strict_edges: Vec<(Property, Property)>,
}

/// Checks every unconditional edge, plus the conditional one when
/// `conditional` is set.
pub fn hierarchy_check(v: &Verdicts, conditional: bool) -> HierarchyCheck {
    let mut edges = IMPLICATIONS.to_vec();
    if conditional {
        edges.push(CONDITIONAL_IMPLICATION);
    }
    let mut violations = Vec::new();
    let mut strict_edges = Vec::new();
    for (a, b) in edges {
        match (v.get(a), v.get(b)) {
            (true, false) => violations.push(format!("({}) holds but ({}) fails", a.roman(), b.roman())),
            (false, true) => strict_edges.push((a, b)),
            _ => {}
        }
    }
    HierarchyCheck { consistent: violations.is_empty(), violations, strict_edges }
}

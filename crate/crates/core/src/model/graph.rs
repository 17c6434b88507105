use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{BotDescriptor, CredibilityReview, DataItem, GroundSignal, NodeId};

/// Any node of a review graph.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Review(CredibilityReview),
    Signal(GroundSignal),
    Item(DataItem),
    Bot(BotDescriptor),
}

impl Node {
    pub fn id(&self) -> &NodeId {
        match self {
            Node::Review(r) => r.id(),
            Node::Signal(s) => s.id(),
            Node::Item(i) => i.id(),
            Node::Bot(b) => b.id(),
        }
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Node::Review(_) => "CredibilityReview",
            Node::Signal(s) => s.kind().type_name(),
            Node::Item(i) => i.kind().type_name(),
            Node::Bot(_) => "Bot",
        }
    }
}

impl From<CredibilityReview> for Node {
    fn from(r: CredibilityReview) -> Self {
        Node::Review(r)
    }
}
impl From<GroundSignal> for Node {
    fn from(s: GroundSignal) -> Self {
        Node::Signal(s)
    }
}
impl From<DataItem> for Node {
    fn from(i: DataItem) -> Self {
        Node::Item(i)
    }
}
impl From<BotDescriptor> for Node {
    fn from(b: BotDescriptor) -> Self {
        Node::Bot(b)
    }
}

/// The provenance graph produced by one top-level review request.
#[derive(Debug, Clone, PartialEq)]
pub struct ReviewGraph {
    root: NodeId,
    nodes: BTreeMap<NodeId, Node>,
}

impl ReviewGraph {
    /// Assemble a graph. No validation happens here; see [`validate_graph`].
    /// Nodes with the same id collapse to the last one given.
    pub fn new(root: NodeId, nodes: impl IntoIterator<Item = Node>) -> Self {
        let nodes = nodes.into_iter().map(|n| (n.id().clone(), n)).collect();
        ReviewGraph { root, nodes }
    }

    pub fn root_id(&self) -> &NodeId {
        &self.root
    }

    pub fn root_review(&self) -> Option<&CredibilityReview> {
        self.review(&self.root)
    }

    pub fn nodes(&self) -> &BTreeMap<NodeId, Node> {
        &self.nodes
    }

    pub fn into_nodes(self) -> BTreeMap<NodeId, Node> {
        self.nodes
    }

    pub fn get(&self, id: &NodeId) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn review(&self, id: &NodeId) -> Option<&CredibilityReview> {
        match self.nodes.get(id) {
            Some(Node::Review(r)) => Some(r),
            _ => None,
        }
    }

    pub fn item(&self, id: &NodeId) -> Option<&DataItem> {
        match self.nodes.get(id) {
            Some(Node::Item(i)) => Some(i),
            _ => None,
        }
    }

    pub fn signal(&self, id: &NodeId) -> Option<&GroundSignal> {
        match self.nodes.get(id) {
            Some(Node::Signal(s)) => Some(s),
            _ => None,
        }
    }

    pub fn bot(&self, id: &NodeId) -> Option<&BotDescriptor> {
        match self.nodes.get(id) {
            Some(Node::Bot(b)) => Some(b),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationRule {
    RootMissing,
    RootNotReview,
    DanglingReference { field: &'static str, target: NodeId },
    WrongTargetType { field: &'static str, target: NodeId, found: &'static str },
    Cycle { via: &'static str },
}

/// One broken invariant, naming the offending node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub node: NodeId,
    pub rule: ViolationRule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            ViolationRule::RootMissing => write!(f, "{}: root node not present", self.node),
            ViolationRule::RootNotReview => write!(f, "{}: root is not a CredibilityReview", self.node),
            ViolationRule::DanglingReference { field, target } => {
                write!(f, "{}: {field} references absent node {target}", self.node)
            }
            ViolationRule::WrongTargetType {
                field,
                target,
                found,
            } => write!(f, "{}: {field} target {target} has unexpected type {found}", self.node),
            ViolationRule::Cycle { via } => write!(f, "{}: cycle through {via}", self.node),
        }
    }
}

/// All invariant violations of `graph`; empty when the graph is well formed.
pub fn validate_graph(graph: &ReviewGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let nodes = &graph.nodes;
    match nodes.get(&graph.root) {
        None => out.push(Violation {
            node: graph.root.clone(),
            rule: ViolationRule::RootMissing,
        }),
        Some(Node::Review(_)) => {}
        Some(_) => out.push(Violation {
            node: graph.root.clone(),
            rule: ViolationRule::RootNotReview,
        }),
    }

    let mut check = |node: &NodeId, field: &'static str, target: &NodeId, ok: fn(&Node) -> bool| {
        match nodes.get(target) {
            None => out.push(Violation {
                node: node.clone(),
                rule: ViolationRule::DanglingReference {
                    field,
                    target: target.clone(),
                },
            }),
            Some(t) if !ok(t) => out.push(Violation {
                node: node.clone(),
                rule: ViolationRule::WrongTargetType {
                    field,
                    target: target.clone(),
                    found: t.type_name(),
                },
            }),
            Some(_) => {}
        }
    };

    for (id, node) in nodes {
        match node {
            Node::Review(r) => {
                check(id, "itemReviewed", r.item_reviewed(), |n| matches!(n, Node::Item(_)));
                check(id, "author", r.author(), |n| matches!(n, Node::Bot(_)));
                for b in r.is_based_on() {
                    check(id, "isBasedOn", b, |n| matches!(n, Node::Review(_) | Node::Signal(_)));
                }
            }
            Node::Item(item) => {
                for target in item.references() {
                    check(id, "itemReference", target, |n| matches!(n, Node::Item(_)));
                }
            }
            Node::Bot(bot) => {
                for dep in bot.depends_on() {
                    check(id, "isBasedOn", dep, |n| matches!(n, Node::Bot(_)));
                }
            }
            Node::Signal(_) => {}
        }
    }

    out.extend(find_cycles(nodes));
    out
}

fn successors(node: &Node) -> (&'static str, Vec<&NodeId>) {
    match node {
        Node::Review(r) => ("isBasedOn", r.is_based_on().iter().collect()),
        Node::Bot(b) => ("isBasedOn", b.depends_on().iter().collect()),
        _ => ("", Vec::new()),
    }
}

/// One violation per back edge found by an iterative depth-first search over
/// review provenance and bot dependencies.
fn find_cycles(nodes: &BTreeMap<NodeId, Node>) -> Vec<Violation> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    let mut marks: HashMap<&NodeId, Mark> = HashMap::new();
    let mut out = Vec::new();

    for start in nodes.keys() {
        if marks.contains_key(start) {
            continue;
        }
        let mut stack: Vec<(&NodeId, usize)> = vec![(start, 0)];
        marks.insert(start, Mark::Active);
        while let Some((id, next)) = stack.pop() {
            let (via, succ) = nodes.get(id).map(successors).unwrap_or(("", Vec::new()));
            if next < succ.len() {
                stack.push((id, next + 1));
                let target = succ[next];
                if !nodes.contains_key(target) {
                    continue;
                }
                match marks.get(target) {
                    Some(Mark::Active) => out.push(Violation {
                        node: id.clone(),
                        rule: ViolationRule::Cycle { via },
                    }),
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(target, Mark::Active);
                        stack.push((target, 0));
                    }
                }
            } else {
                marks.insert(id, Mark::Done);
            }
        }
    }
    out
}

//! JSON-LD form of review graphs.
//!
//! Documents look like
//!
//! ```json
//! { "@context": { ... }, "root": {"@id": "..."}, "@graph": [ node, ... ] }
//! ```
//!
//! Nodes are emitted in identifier order and object keys in lexicographic
//! order, so equal graphs serialize to identical bytes. The context is the
//! one shipped in `context/lcr.jsonld`: schema.org is the default vocabulary
//! and the extension terms (`CredibilityReview`, `Bot`, `Sentence`,
//! `confidence`, ...) live in a single `lcr:` namespace.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use chrono::{DateTime, SecondsFormat, Utc};
use serde_json::{json, Map, Value};

use super::{
    validate_graph, BotDescriptor, CredibilityReview, DataItem, GroundSignal, ItemKind, LinkEvidence,
    ModelError, Node, NodeId, Rating, ReviewDraft, ReviewGraph, SignalKind, REVIEW_ASPECT,
};
use crate::algebra::StanceLabel;
use crate::normalize::{ClaimReviewRecord, FactChecker, RatingBasis};

/// The static context file shipped with the crate.
pub const CONTEXT_DOCUMENT: &str = include_str!("../../context/lcr.jsonld");

fn context() -> &'static Value {
    static CTX: OnceLock<Value> = OnceLock::new();
    CTX.get_or_init(|| {
        let doc: Value = serde_json::from_str(CONTEXT_DOCUMENT).expect("shipped context is valid JSON");
        doc["@context"].clone()
    })
}

fn reference(id: &NodeId) -> Value {
    json!({ "@id": id.as_str() })
}

fn references(ids: &[NodeId]) -> Value {
    Value::Array(ids.iter().map(reference).collect())
}

fn timestamp(t: &DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::AutoSi, true)
}

/// Serialize a graph. Refuses graphs that violate their invariants.
pub fn serialize_jsonld(graph: &ReviewGraph) -> Result<String, ModelError> {
    let violations = validate_graph(graph);
    if !violations.is_empty() {
        return Err(ModelError::Invalid(violations));
    }
    let nodes: Vec<Value> = graph.nodes().values().map(node_to_value).collect();
    let doc = json!({
        "@context": context(),
        "root": reference(graph.root_id()),
        "@graph": nodes,
    });
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// JSON-LD object for a single node.
pub fn node_to_value(node: &Node) -> Value {
    let mut obj = Map::new();
    obj.insert("@id".into(), Value::String(node.id().to_string()));
    obj.insert("@type".into(), Value::String(node.type_name().into()));
    match node {
        Node::Review(r) => review_fields(r, &mut obj),
        Node::Signal(s) => signal_fields(s, &mut obj),
        Node::Item(i) => item_fields(i, &mut obj),
        Node::Bot(b) => {
            obj.insert("name".into(), b.name().into());
            obj.insert("softwareVersion".into(), b.version().into());
            obj.insert("isBasedOn".into(), references(b.depends_on()));
        }
    }
    Value::Object(obj)
}

fn review_fields(r: &CredibilityReview, obj: &mut Map<String, Value>) {
    obj.insert("itemReviewed".into(), reference(r.item_reviewed()));
    obj.insert("reviewAspect".into(), REVIEW_ASPECT.into());
    obj.insert(
        "reviewRating".into(),
        json!({
            "@type": "Rating",
            "ratingValue": r.rating().value(),
            "confidence": r.rating().confidence(),
            "reviewAspect": REVIEW_ASPECT,
            "ratingExplanation": r.explanation(),
        }),
    );
    obj.insert("isBasedOn".into(), references(r.is_based_on()));
    obj.insert("author".into(), reference(r.author()));
    obj.insert("dateCreated".into(), timestamp(&r.created_at()).into());
    if let Some(link) = r.link() {
        obj.insert("stance".into(), link.stance.as_str().into());
        obj.insert("similarity".into(), link.similarity.into());
    }
    if !r.notes().is_empty() {
        obj.insert("adjustments".into(), r.notes().into());
    }
}

fn signal_fields(s: &GroundSignal, obj: &mut Map<String, Value>) {
    match s.kind() {
        SignalKind::FactCheck {
            record,
            rating,
            basis,
        } => {
            obj.insert("claimReviewed".into(), record.claim_text.clone().into());
            obj.insert("url".into(), record.review_url.clone().into());
            let mut author = Map::new();
            author.insert("@type".into(), "Organization".into());
            author.insert("name".into(), record.fact_checker.name.clone().into());
            if let Some(url) = &record.fact_checker.url {
                author.insert("url".into(), url.clone().into());
            }
            obj.insert("author".into(), Value::Object(author));
            let mut verdict = Map::new();
            verdict.insert("@type".into(), "Rating".into());
            if let Some(v) = record.rating_value {
                verdict.insert("ratingValue".into(), v.into());
            }
            if let Some(v) = record.best_rating {
                verdict.insert("bestRating".into(), v.into());
            }
            if let Some(v) = record.worst_rating {
                verdict.insert("worstRating".into(), v.into());
            }
            if let Some(v) = &record.alternate_name {
                verdict.insert("alternateName".into(), v.clone().into());
            }
            obj.insert("reviewRating".into(), Value::Object(verdict));
            obj.insert(
                "normalizedRating".into(),
                json!({"@type": "Rating", "ratingValue": rating.value(), "confidence": rating.confidence()}),
            );
            obj.insert("normalization".into(), basis.as_str().into());
        }
        SignalKind::WebSiteReputation {
            domain,
            rater_name,
            rating,
            review_url,
        } => {
            obj.insert("domain".into(), domain.clone().into());
            obj.insert("author".into(), json!({"@type": "Organization", "name": rater_name}));
            obj.insert(
                "reviewRating".into(),
                json!({"@type": "Rating", "ratingValue": rating.value(), "confidence": rating.confidence()}),
            );
            obj.insert("url".into(), review_url.clone().into());
        }
        SignalKind::PrecrawledSentence {
            text,
            source_url,
            source_domain,
            crawl_date,
        } => {
            obj.insert("text".into(), text.clone().into());
            obj.insert("url".into(), source_url.clone().into());
            obj.insert("domain".into(), source_domain.clone().into());
            obj.insert("dateCreated".into(), crawl_date.clone().into());
        }
    }
}

fn item_fields(i: &DataItem, obj: &mut Map<String, Value>) {
    match i.kind() {
        ItemKind::Sentence { text } | ItemKind::Claim { text } => {
            obj.insert("text".into(), text.clone().into());
        }
        ItemKind::Article {
            url,
            title,
            body_text,
            website,
        } => {
            obj.insert("url".into(), url.clone().into());
            obj.insert("headline".into(), title.clone().into());
            obj.insert("articleBody".into(), body_text.clone().into());
            if let Some(w) = website {
                obj.insert("isPartOf".into(), reference(w));
            }
        }
        ItemKind::SocialMediaPost {
            url,
            text,
            linked_items,
            website,
        } => {
            obj.insert("url".into(), url.clone().into());
            obj.insert("text".into(), text.clone().into());
            obj.insert("sharedContent".into(), references(linked_items));
            if let Some(w) = website {
                obj.insert("isPartOf".into(), reference(w));
            }
        }
        ItemKind::WebSite { domain } => {
            obj.insert("domain".into(), domain.clone().into());
        }
        ItemKind::SentencePair { source, target } => {
            obj.insert("sourceSentence".into(), reference(source));
            obj.insert("targetSentence".into(), reference(target));
        }
    }
}

/// Parse a review-graph document. The result satisfies every graph invariant.
pub fn parse_jsonld(document: &str) -> Result<ReviewGraph, ModelError> {
    let doc: Value = serde_json::from_str(document)?;
    let obj = doc.as_object().ok_or_else(|| ModelError::InvalidField {
        node: "<document>".into(),
        field: "@graph",
        reason: "document is not a JSON object".into(),
    })?;
    let root = obj
        .get("root")
        .map(|v| as_reference(v, "<document>", "root"))
        .transpose()?
        .ok_or_else(|| ModelError::MissingField {
            node: "<document>".into(),
            field: "root",
        })?;
    let nodes = graph_array(obj)?
        .iter()
        .map(node_from_value)
        .collect::<Result<Vec<_>, _>>()?;
    let graph = ReviewGraph::new(root, nodes);
    let violations = validate_graph(&graph);
    if violations.is_empty() {
        Ok(graph)
    } else {
        Err(ModelError::Invalid(violations))
    }
}

fn graph_array(obj: &Map<String, Value>) -> Result<&Vec<Value>, ModelError> {
    match obj.get("@graph") {
        Some(Value::Array(a)) => Ok(a),
        Some(_) => Err(ModelError::InvalidField {
            node: "<document>".into(),
            field: "@graph",
            reason: "expected an array".into(),
        }),
        None => Err(ModelError::MissingField {
            node: "<document>".into(),
            field: "@graph",
        }),
    }
}

/// Data items carried by a review request, plus the one to review.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemDocument {
    pub root: NodeId,
    pub items: BTreeMap<NodeId, DataItem>,
}

impl ItemDocument {
    pub fn single(item: DataItem) -> Self {
        ItemDocument {
            root: item.id().clone(),
            items: BTreeMap::from([(item.id().clone(), item)]),
        }
    }

    pub fn root_item(&self) -> &DataItem {
        &self.items[&self.root]
    }
}

/// Parse a request body: either one data-item node, or a document with a
/// `@graph` of items and an optional `root`. Without `root` the root is the
/// single item no other item refers to.
pub fn parse_items(document: &str) -> Result<ItemDocument, ModelError> {
    let doc: Value = serde_json::from_str(document)?;
    let obj = doc.as_object().ok_or_else(|| ModelError::MissingField {
        node: "<document>".into(),
        field: "@type",
    })?;
    let values: Vec<&Value> = if obj.contains_key("@graph") {
        graph_array(obj)?.iter().collect()
    } else {
        vec![&doc]
    };
    let mut items = BTreeMap::new();
    for v in values {
        // Request items may omit @id; they then get a content-addressed one.
        let anonymous = v.as_object().is_some_and(|o| !o.contains_key("@id"));
        let node = if anonymous {
            let mut with_id = v.clone();
            let o = with_id.as_object_mut().expect("checked above");
            node_type(o, "<item>")?;
            o.insert("@id".into(), Value::String("_:item".into()));
            node_from_value(&with_id)?
        } else {
            node_from_value(v)?
        };
        match node {
            Node::Item(item) => {
                let item = if anonymous { DataItem::new(item.kind().clone())? } else { item };
                items.insert(item.id().clone(), item);
            }
            other => {
                return Err(ModelError::InvalidField {
                    node: other.id().to_string(),
                    field: "@type",
                    reason: format!("{} is not a reviewable data item", other.type_name()),
                })
            }
        }
    }
    let root = match obj.get("root") {
        Some(v) => as_reference(v, "<document>", "root")?,
        None => {
            let referenced: BTreeSet<&NodeId> = items.values().flat_map(|i| i.references()).collect();
            let mut roots = items.keys().filter(|id| !referenced.contains(id));
            match (roots.next(), roots.next()) {
                (Some(r), None) => r.clone(),
                _ => {
                    return Err(ModelError::MissingField {
                        node: "<document>".into(),
                        field: "root",
                    })
                }
            }
        }
    };
    if !items.contains_key(&root) {
        return Err(ModelError::InvalidField {
            node: root.to_string(),
            field: "root",
            reason: "root is not among the supplied items".into(),
        });
    }
    Ok(ItemDocument { root, items })
}

fn strip_prefix(t: &str) -> &str {
    for p in ["http://schema.org/", "https://schema.org/", "schema:", "lcr:"] {
        if let Some(rest) = t.strip_prefix(p) {
            return rest;
        }
    }
    t
}

fn node_type(obj: &Map<String, Value>, node: &str) -> Result<String, ModelError> {
    match obj.get("@type") {
        Some(Value::String(s)) => Ok(strip_prefix(s).to_string()),
        Some(Value::Array(a)) if a.len() == 1 && a[0].is_string() => {
            Ok(strip_prefix(a[0].as_str().unwrap_or_default()).to_string())
        }
        Some(_) => Err(ModelError::InvalidField {
            node: node.into(),
            field: "@type",
            reason: "expected a single type name".into(),
        }),
        None => Err(ModelError::MissingField {
            node: node.into(),
            field: "@type",
        }),
    }
}

/// Parse one JSON-LD node object.
pub fn node_from_value(v: &Value) -> Result<Node, ModelError> {
    let obj = v.as_object().ok_or_else(|| ModelError::InvalidField {
        node: "<node>".into(),
        field: "@id",
        reason: "node is not a JSON object".into(),
    })?;
    let id_str = match obj.get("@id") {
        Some(Value::String(s)) if !s.is_empty() => s.as_str(),
        Some(_) => {
            return Err(ModelError::InvalidField {
                node: "<node>".into(),
                field: "@id",
                reason: "expected a non-empty string".into(),
            })
        }
        None => {
            return Err(ModelError::MissingField {
                node: "<node>".into(),
                field: "@id",
            })
        }
    };
    let id = NodeId::new(id_str);
    let f = Fields { obj, node: id_str };
    let ty = node_type(obj, id_str)?;
    let node = match ty.as_str() {
        "CredibilityReview" => Node::Review(parse_review(id, &f)?),
        "Bot" => Node::Bot(BotDescriptor::with_id(
            id,
            f.string("name")?,
            f.string("softwareVersion")?,
            f.refs("isBasedOn")?,
        )),
        "ClaimReview" => Node::Signal(parse_fact_check(id, &f)?),
        "WebSiteReputation" => {
            let rating = f.sub("reviewRating")?;
            let kind = SignalKind::WebSiteReputation {
                domain: f.string("domain")?,
                rater_name: f.sub("author")?.string("name")?,
                rating: Rating::new(rating.number("ratingValue")?, rating.number("confidence")?)?,
                review_url: f.string("url")?,
            };
            Node::Signal(GroundSignal::with_id(id, kind)?)
        }
        "PrecrawledSentence" => {
            let kind = SignalKind::PrecrawledSentence {
                text: f.string("text")?,
                source_url: f.string("url")?,
                source_domain: f.string("domain")?,
                crawl_date: f.string("dateCreated")?,
            };
            Node::Signal(GroundSignal::with_id(id, kind)?)
        }
        "Sentence" => item(id, ItemKind::Sentence { text: f.string("text")? })?,
        "Claim" => item(id, ItemKind::Claim { text: f.string("text")? })?,
        "Article" | "NewsArticle" => item(
            id,
            ItemKind::Article {
                url: f.opt_string("url")?.unwrap_or_default(),
                title: f.opt_string("headline")?.unwrap_or_default(),
                body_text: f.opt_string("articleBody")?.unwrap_or_default(),
                website: f.opt_ref("isPartOf")?,
            },
        )?,
        "SocialMediaPosting" => item(
            id,
            ItemKind::SocialMediaPost {
                url: f.opt_string("url")?.unwrap_or_default(),
                text: f.opt_string("text")?.unwrap_or_default(),
                linked_items: f.refs_or_empty("sharedContent")?,
                website: f.opt_ref("isPartOf")?,
            },
        )?,
        "WebSite" => item(id, ItemKind::WebSite { domain: f.string("domain")? })?,
        "SentencePair" => item(
            id,
            ItemKind::SentencePair {
                source: f.reference("sourceSentence")?,
                target: f.reference("targetSentence")?,
            },
        )?,
        other => return Err(ModelError::UnknownType(other.to_string())),
    };
    Ok(node)
}

fn item(id: NodeId, kind: ItemKind) -> Result<Node, ModelError> {
    Ok(Node::Item(DataItem::with_id(id, kind)?))
}

fn parse_review(id: NodeId, f: &Fields) -> Result<CredibilityReview, ModelError> {
    let aspect = f.string("reviewAspect")?;
    if aspect != REVIEW_ASPECT {
        return Err(f.invalid("reviewAspect", format!("expected {REVIEW_ASPECT:?}, found {aspect:?}")));
    }
    let rating_obj = f.sub("reviewRating")?;
    let rating = Rating::new(rating_obj.number("ratingValue")?, rating_obj.number("confidence")?)?;
    let created = f.string("dateCreated")?;
    let created_at = DateTime::parse_from_rfc3339(&created)
        .map_err(|e| f.invalid("dateCreated", e.to_string()))?
        .with_timezone(&Utc);
    let mut draft = ReviewDraft::new(f.reference("itemReviewed")?, rating, f.reference("author")?, created_at);
    draft.is_based_on = f.refs("isBasedOn")?;
    draft.explanation = rating_obj.opt_string("ratingExplanation")?.unwrap_or_default();
    if let Some(stance) = f.opt_string("stance")? {
        let stance: StanceLabel = stance.parse().map_err(|e: String| f.invalid("stance", e))?;
        let similarity = f.number("similarity")?;
        draft.link = Some(LinkEvidence { stance, similarity });
    }
    if let Some(notes) = f.obj.get("adjustments") {
        draft.notes = serde_json::from_value(notes.clone())
            .map_err(|e| f.invalid("adjustments", e.to_string()))?;
    }
    CredibilityReview::with_id(id, draft)
}

fn parse_fact_check(id: NodeId, f: &Fields) -> Result<GroundSignal, ModelError> {
    let verdict = f.sub("reviewRating")?;
    let author = f.sub("author")?;
    let record = ClaimReviewRecord {
        claim_text: f.string("claimReviewed")?,
        rating_value: verdict.opt_number("ratingValue")?,
        best_rating: verdict.opt_number("bestRating")?,
        worst_rating: verdict.opt_number("worstRating")?,
        alternate_name: verdict.opt_string("alternateName")?,
        fact_checker: FactChecker {
            name: author.string("name")?,
            url: author.opt_string("url")?,
        },
        review_url: f.string("url")?,
    };
    let norm = f.sub("normalizedRating")?;
    let rating = Rating::new(norm.number("ratingValue")?, norm.number("confidence")?)?;
    let basis: RatingBasis = f
        .string("normalization")?
        .parse()
        .map_err(|e: String| f.invalid("normalization", e))?;
    GroundSignal::with_id(
        id,
        SignalKind::FactCheck {
            record,
            rating,
            basis,
        },
    )
}

/// Field accessors that name the node in their errors.
struct Fields<'a> {
    obj: &'a Map<String, Value>,
    node: &'a str,
}

impl<'a> Fields<'a> {
    fn invalid(&self, field: &'static str, reason: impl Into<String>) -> ModelError {
        ModelError::InvalidField {
            node: self.node.into(),
            field,
            reason: reason.into(),
        }
    }

    fn missing(&self, field: &'static str) -> ModelError {
        ModelError::MissingField {
            node: self.node.into(),
            field,
        }
    }

    fn string(&self, field: &'static str) -> Result<String, ModelError> {
        self.opt_string(field)?.ok_or_else(|| self.missing(field))
    }

    fn opt_string(&self, field: &'static str) -> Result<Option<String>, ModelError> {
        match self.obj.get(field) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(self.invalid(field, "expected a string")),
        }
    }

    fn number(&self, field: &'static str) -> Result<f64, ModelError> {
        self.opt_number(field)?.ok_or_else(|| self.missing(field))
    }

    fn opt_number(&self, field: &'static str) -> Result<Option<f64>, ModelError> {
        match self.obj.get(field) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::Number(n)) => Ok(n.as_f64()),
            Some(_) => Err(self.invalid(field, "expected a number")),
        }
    }

    fn sub(&self, field: &'static str) -> Result<Fields<'a>, ModelError> {
        match self.obj.get(field) {
            Some(Value::Object(o)) => Ok(Fields { obj: o, node: self.node }),
            Some(_) => Err(self.invalid(field, "expected an object")),
            None => Err(self.missing(field)),
        }
    }

    fn reference(&self, field: &'static str) -> Result<NodeId, ModelError> {
        self.opt_ref(field)?.ok_or_else(|| self.missing(field))
    }

    fn opt_ref(&self, field: &'static str) -> Result<Option<NodeId>, ModelError> {
        match self.obj.get(field) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => as_reference(v, self.node, field).map(Some),
        }
    }

    fn refs(&self, field: &'static str) -> Result<Vec<NodeId>, ModelError> {
        match self.obj.get(field) {
            None => Err(self.missing(field)),
            Some(_) => self.refs_or_empty(field),
        }
    }

    fn refs_or_empty(&self, field: &'static str) -> Result<Vec<NodeId>, ModelError> {
        match self.obj.get(field) {
            None | Some(Value::Null) => Ok(Vec::new()),
            Some(Value::Array(a)) => a.iter().map(|v| as_reference(v, self.node, field)).collect(),
            Some(v) => Ok(vec![as_reference(v, self.node, field)?]),
        }
    }
}

fn as_reference(v: &Value, node: &str, field: &'static str) -> Result<NodeId, ModelError> {
    match v {
        Value::String(s) if !s.is_empty() => Ok(NodeId::new(s.clone())),
        Value::Object(o) => match o.get("@id") {
            Some(Value::String(s)) if !s.is_empty() => Ok(NodeId::new(s.clone())),
            _ => Err(ModelError::InvalidField {
                node: node.into(),
                field,
                reason: "reference object lacks @id".into(),
            }),
        },
        _ => Err(ModelError::InvalidField {
            node: node.into(),
            field,
            reason: "expected a node reference".into(),
        }),
    }
}

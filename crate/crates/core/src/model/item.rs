use serde_json::json;

use super::{ModelError, NodeId};

/// A reviewable piece of content.
#[derive(Debug, Clone, PartialEq)]
pub struct DataItem {
    id: NodeId,
    kind: ItemKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ItemKind {
    Sentence {
        text: String,
    },
    Claim {
        text: String,
    },
    Article {
        url: String,
        title: String,
        body_text: String,
        website: Option<NodeId>,
    },
    SocialMediaPost {
        url: String,
        text: String,
        linked_items: Vec<NodeId>,
        website: Option<NodeId>,
    },
    WebSite {
        domain: String,
    },
    SentencePair {
        source: NodeId,
        target: NodeId,
    },
}

impl ItemKind {
    pub fn type_name(&self) -> &'static str {
        match self {
            ItemKind::Sentence { .. } => "Sentence",
            ItemKind::Claim { .. } => "Claim",
            ItemKind::Article { .. } => "Article",
            ItemKind::SocialMediaPost { .. } => "SocialMediaPosting",
            ItemKind::WebSite { .. } => "WebSite",
            ItemKind::SentencePair { .. } => "SentencePair",
        }
    }

    fn content(&self) -> serde_json::Value {
        match self {
            ItemKind::Sentence { text } => json!({"type": "Sentence", "text": text}),
            ItemKind::Claim { text } => json!({"type": "Claim", "text": text}),
            ItemKind::Article {
                url,
                title,
                body_text,
                website,
            } => json!({
                "type": "Article", "url": url, "title": title,
                "body": body_text, "website": website,
            }),
            ItemKind::SocialMediaPost {
                url,
                text,
                linked_items,
                website,
            } => json!({
                "type": "SocialMediaPosting", "url": url, "text": text,
                "linked": linked_items, "website": website,
            }),
            ItemKind::WebSite { domain } => json!({"type": "WebSite", "domain": domain}),
            ItemKind::SentencePair { source, target } => {
                json!({"type": "SentencePair", "source": source, "target": target})
            }
        }
    }

    fn id_prefix(&self) -> &'static str {
        match self {
            ItemKind::Sentence { .. } => "sentence",
            ItemKind::Claim { .. } => "claim",
            ItemKind::Article { .. } => "article",
            ItemKind::SocialMediaPost { .. } => "post",
            ItemKind::WebSite { .. } => "website",
            ItemKind::SentencePair { .. } => "pair",
        }
    }

    fn validated(self) -> Result<Self, ModelError> {
        match self {
            ItemKind::Sentence { text } => Ok(ItemKind::Sentence {
                text: non_empty(text, "Sentence")?,
            }),
            ItemKind::Claim { text } => Ok(ItemKind::Claim {
                text: non_empty(text, "Claim")?,
            }),
            ItemKind::WebSite { domain } => {
                if normalize_domain(&domain)? != domain {
                    return Err(ModelError::InvalidDomain(domain));
                }
                Ok(ItemKind::WebSite { domain })
            }
            other => Ok(other),
        }
    }
}

fn non_empty(text: String, kind: &'static str) -> Result<String, ModelError> {
    if text.trim().is_empty() {
        Err(ModelError::EmptyText(kind))
    } else {
        Ok(text)
    }
}

impl DataItem {
    /// Build an item with a content-addressed identifier.
    pub fn new(kind: ItemKind) -> Result<Self, ModelError> {
        let kind = kind.validated()?;
        let id = NodeId::content_addressed(kind.id_prefix(), &kind.content());
        Ok(DataItem { id, kind })
    }

    /// Build an item under an externally assigned identifier (e.g. a tweet URL).
    pub fn with_id(id: NodeId, kind: ItemKind) -> Result<Self, ModelError> {
        Ok(DataItem {
            id,
            kind: kind.validated()?,
        })
    }

    pub fn sentence(text: impl Into<String>) -> Result<Self, ModelError> {
        Self::new(ItemKind::Sentence { text: text.into() })
    }

    pub fn claim(text: impl Into<String>) -> Result<Self, ModelError> {
        Self::new(ItemKind::Claim { text: text.into() })
    }

    /// A website item; `domain` may be a URL or carry mixed case, it is normalized.
    pub fn website(domain: &str) -> Result<Self, ModelError> {
        Self::new(ItemKind::WebSite {
            domain: normalize_domain(domain)?,
        })
    }

    pub fn id(&self) -> &NodeId {
        &self.id
    }

    pub fn kind(&self) -> &ItemKind {
        &self.kind
    }

    /// Text of a Sentence or Claim.
    pub fn text(&self) -> Option<&str> {
        match &self.kind {
            ItemKind::Sentence { text } | ItemKind::Claim { text } => Some(text),
            ItemKind::SocialMediaPost { text, .. } => Some(text),
            _ => None,
        }
    }

    /// Ids this item refers to.
    pub fn references(&self) -> Vec<&NodeId> {
        match &self.kind {
            ItemKind::Article { website, .. } => website.iter().collect(),
            ItemKind::SocialMediaPost {
                linked_items,
                website,
                ..
            } => linked_items.iter().chain(website.iter()).collect(),
            ItemKind::SentencePair { source, target } => vec![source, target],
            _ => Vec::new(),
        }
    }
}

/// Lowercase host name without scheme, credentials, port, path or trailing dot.
pub fn normalize_domain(input: &str) -> Result<String, ModelError> {
    let mut s = input.trim().to_lowercase();
    if let Some(pos) = s.find("://") {
        s = s[pos + 3..].to_string();
    }
    if let Some(end) = s.find(['/', '?', '#']) {
        s.truncate(end);
    }
    if let Some(at) = s.rfind('@') {
        s = s[at + 1..].to_string();
    }
    if let Some(colon) = s.find(':') {
        s.truncate(colon);
    }
    let s = s.trim_end_matches('.').to_string();
    let valid = !s.is_empty()
        && !s.starts_with('.')
        && !s.contains("..")
        && s
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '.' || c == '-');
    if valid {
        Ok(s)
    } else {
        Err(ModelError::InvalidDomain(input.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_normalization() {
        assert_eq!(normalize_domain("https://WWW.Krone.at/path?q=1").unwrap(), "www.krone.at");
        assert_eq!(normalize_domain("example.com.").unwrap(), "example.com");
        assert_eq!(normalize_domain("http://user@news.example.com:8080/").unwrap(), "news.example.com");
        assert!(normalize_domain("").is_err());
        assert!(normalize_domain("bad domain").is_err());
        assert!(normalize_domain("https:///").is_err());
    }

    #[test]
    fn sentence_text_must_be_non_empty() {
        assert!(DataItem::sentence("   ").is_err());
        assert!(DataItem::claim("").is_err());
        assert!(DataItem::sentence("ok").is_ok());
    }

    #[test]
    fn website_domain_must_be_normalized_when_given_an_id() {
        let bad = ItemKind::WebSite {
            domain: "WWW.X.COM".into(),
        };
        assert!(DataItem::with_id(NodeId::new("x"), bad).is_err());
        assert_eq!(
            DataItem::website("https://News.Example.com/a").unwrap().kind(),
            &ItemKind::WebSite {
                domain: "news.example.com".into()
            }
        );
    }

    #[test]
    fn identical_content_shares_id() {
        let a = DataItem::sentence("The sky is blue.").unwrap();
        let b = DataItem::sentence("The sky is blue.").unwrap();
        let c = DataItem::claim("The sky is blue.").unwrap();
        assert_eq!(a.id(), b.id());
        assert_ne!(a.id(), c.id());
    }
}

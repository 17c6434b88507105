mod common;

use std::sync::Arc;

use lcr_core::algebra::{least_credible, StanceLabel};
use lcr_core::bots::{BotConfig, BotError, Engine, Registry, NO_SIGNAL};
use lcr_core::model::{parse_items, serialize_jsonld, DataItem, ItemKind, Node, NodeId, ReviewGraph};
use lcr_core::nlp::{NlpError, SentenceEncoder, SentenceIndex, SentenceVector, BaselineStance};
use lcr_core::par::ExecMode;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

fn rating(r: &lcr_core::bots::Reviewed) -> (f64, f64) {
    (r.rating().value(), r.rating().confidence())
}

/// Every review either rests on something or says it rests on nothing.
fn assert_provenance_terminates(g: &ReviewGraph) {
    for node in g.nodes().values() {
        if let Node::Review(cr) = node {
            assert!(
                !cr.is_based_on().is_empty() || cr.notes().iter().any(|n| n == NO_SIGNAL),
                "{} has no provenance",
                cr.id()
            );
        }
    }
}

#[test]
fn claim_lookup_false_fact_check() {
    let e = common::engine();
    let r = e.review_claim(&DataItem::claim("Obama said that since 1992 the Republicans have had all the good ideas.").unwrap()).unwrap();
    assert_eq!(rating(&r), (-1.0, 1.0));
    let signal = &r.review.is_based_on()[0];
    assert!(matches!(r.nodes.get(signal), Some(Node::Signal(_))));
    let text = r.review.explanation();
    assert!(text.contains("[fact-check](http://www.politifact.com/obama-ideas)"), "{text}");
    assert!(text.contains("[politifact](http://www.politifact.com)"));
    assert!(text.contains("*not credible*"));
}

#[test]
fn claim_lookup_unseen_and_conflicting() {
    let e = common::engine();
    let none = e.review_claim(&DataItem::claim("Penguins run the post office.").unwrap()).unwrap();
    assert_eq!(rating(&none), (0.0, 0.0));
    assert!(none.review.explanation().contains("no fact-check found"));
    assert!(!none.has_signal());
    // "False" (c = 1.0) against "Half true" (c = 0.7).
    let r = e.review_claim(&DataItem::claim("The moon is made of cheese").unwrap()).unwrap();
    assert_eq!(rating(&r), (-1.0, 1.0));
}

#[test]
fn claim_numeric_template() {
    let e = common::engine();
    let r = e.review_claim(&DataItem::claim("Ford is moving all of their small-car production to Mexico.").unwrap()).unwrap();
    assert_eq!(rating(&r), (-0.5, 1.0));
    assert!(r.review.explanation().contains("is moving") && r.review.explanation().contains("*mostly not credible*"));
    assert!(r.review.explanation().contains("normalised numeric ratingValue 2 in range [1-5]"));
}

#[test]
fn website_aggregation() {
    let e = common::engine();
    let cnn = e.review_website(&DataItem::website("www.cnn.com").unwrap()).unwrap();
    assert!(close(cnn.rating().value(), (0.8 * 0.9 + 0.6 * 0.8) / 1.7));
    assert_eq!(cnn.rating().confidence(), 0.95);
    assert_eq!(cnn.review.is_based_on().len(), 2);
    let unknown = e.review_website(&DataItem::website("nowhere.example.net").unwrap()).unwrap();
    assert_eq!(rating(&unknown), (0.0, 0.0));
    let krone = e.review_website(&DataItem::website("www.krone.at").unwrap()).unwrap();
    assert!(krone.review.explanation().starts_with(
        "Site `www.krone.at` seems *mostly credible* based on 2 review(s) by external rater(s) [NewsGuard]"
    ));
}

#[test]
fn precrawled_decay() {
    let e = common::engine();
    let s = DataItem::sentence("Now we want to invest in the greatest welfare program in modern times.").unwrap();
    let r = e.review_sentence_precrawled(&s).unwrap().unwrap();
    assert!(close(r.rating().value(), 0.7));
    assert!(close(r.rating().confidence(), 0.72));
    assert!(r.review.explanation().contains("as it was published in site `www.expressen.se`"));
    assert_eq!(r.review.is_based_on().len(), 2);
    assert!(e.review_sentence_precrawled(&DataItem::sentence("Never crawled anywhere at all.").unwrap()).unwrap().is_none());

    let full = common::engine_with(BotConfig { precrawl_decay: 1.0, ..Default::default() });
    let r = full.review_sentence_precrawled(&s).unwrap().unwrap();
    assert!(close(r.rating().confidence(), 0.9));
}

#[test]
fn semsim_exact_and_negated() {
    let e = common::engine();
    let exact = e.review_sentence_semsim(&DataItem::sentence("The moon is made of cheese.").unwrap()).unwrap();
    assert_eq!(rating(&exact), (-1.0, 1.0));
    let link = exact.review.link().unwrap();
    assert_eq!((link.stance, link.similarity), (StanceLabel::Agree, 1.0));
    assert!(exact.review.explanation().contains("as it agrees with sentence"));

    let negated = e.review_sentence_semsim(&DataItem::sentence("The moon is not made of cheese.").unwrap()).unwrap();
    assert!(negated.rating().value() > 0.0);
    assert_eq!(negated.review.link().unwrap().stance, StanceLabel::Disagree);
    assert!(negated.review.explanation().contains("disagrees with"));
    assert!(negated.review.explanation().contains("`The moon is made of cheese.`"));

    let nothing = e.review_sentence_semsim(&DataItem::sentence("Quarterly widget shipments rose sharply in Ohio.").unwrap()).unwrap();
    assert_eq!(rating(&nothing), (0.0, 0.0));
}

#[test]
fn semsim_links_crawled_sentences() {
    let e = common::engine();
    let r = e
        .review_sentence_semsim(&DataItem::sentence("Now we want to invest in the greatest welfare program in modern times.").unwrap())
        .unwrap();
    assert!(close(r.rating().value(), 0.7));
    assert!(close(r.rating().confidence(), 0.72));
}

fn article(body: &str, url: &str) -> DataItem {
    titled("Part 1 of the debate", body, url)
}

fn titled(title: &str, body: &str, url: &str) -> DataItem {
    DataItem::new(ItemKind::Article {
        url: url.into(),
        title: title.into(),
        body_text: body.into(),
        website: None,
    })
    .unwrap()
}

#[test]
fn article_least_credible_sentence() {
    let e = common::engine();
    let a = article(
        "Drinking water helps the human body stay hydrated. The moon is made of cheese. Nothing else happened here today.",
        "https://www.cnn.com/2020/debate",
    );
    let r = e.review_article(&a).unwrap();
    assert_eq!(rating(&r), (-1.0, 1.0));
    assert!(r.review.explanation().contains("based on its least credible sentence"), "{}", r.review.explanation());

    let empty = e.review_article(&titled("", "Hi. Ok.", "https://nowhere.example.net/x")).unwrap();
    assert_eq!(rating(&empty), (0.0, 0.0));
}

#[test]
fn article_website_only_and_caution() {
    let body = "Unverifiable gossip about celebrities is spreading fast online.";
    let a = article(body, "https://hoax-daily.example/story");
    let plain = common::engine().review_article(&a).unwrap();
    assert!(close(plain.rating().value(), -0.8));
    assert!(close(plain.rating().confidence(), 0.9 * 0.8));
    assert!(plain.review.explanation().contains("based only on the site"));

    let mut cfg = BotConfig::default();
    cfg.caution.enabled = true;
    let cautious = common::engine_with(cfg).review_article(&a).unwrap();
    assert!(close(cautious.rating().value(), -0.4));
    assert!(close(cautious.rating().confidence(), 0.9 * 0.8 * 0.5));
    assert!(cautious.review.notes().iter().any(|n| n.starts_with("caution")));
}

#[test]
fn brute_force_article_oracle() {
    let e = common::engine();
    let body = "Drinking water helps the human body stay hydrated. The moon is made of cheese. \
                Obama said that since 1992 the Republicans have had all the good ideas.";
    let a = article(body, "https://www.cnn.com/x");
    let r = e.review_article(&a).unwrap();
    // Recompute each part independently and select.
    let mut parts: Vec<(String, f64, f64)> = Vec::new();
    for s in lcr_core::bots::segment::segment(body, 5, 60) {
        let p = e.review_sentence_semsim(&DataItem::sentence(s).unwrap()).unwrap();
        if p.has_signal() {
            parts.push((p.id().to_string(), p.rating().value(), p.rating().confidence()));
        }
    }
    let site = e.review_website(&DataItem::website("www.cnn.com").unwrap()).unwrap();
    parts.push((site.id().to_string(), site.rating().value(), site.rating().confidence() * 0.8));
    let eligible: Vec<_> = parts.iter().filter(|p| p.2 > 0.5).collect();
    let min = eligible
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(b.2.total_cmp(&a.2)).then(a.0.cmp(&b.0)))
        .unwrap();
    assert_eq!((r.rating().value(), r.rating().confidence()), (min.1, min.2));
    let _ = least_credible::<lcr_core::CredibilityReview>;
}

const TWEET: &str = r#"{"@graph": [
  {"@id": "https://twitter.com/someone/status/1", "@type": "SocialMediaPosting",
   "url": "https://twitter.com/someone/status/1",
   "text": "Absolutely fantastic, the Nazi platform from the early 1930s is awfully similar to the Democratic Party platform of today. https://t.co/abc",
   "isPartOf": {"@id": "urn:site:twitter"}},
  {"@id": "urn:site:twitter", "@type": "WebSite", "domain": "twitter.com"}
]}"#;

#[test]
fn tweet_agreeing_with_false_claim() {
    let e = common::engine();
    let doc = parse_items(TWEET).unwrap();
    let g = e.review_document(&doc).unwrap();
    let root = g.root_review().unwrap();
    assert!(root.rating().value() <= -0.5, "{:?}", root.rating());
    assert!(root.explanation().contains("in [post](https://twitter.com/someone/status/1)"));
    assert!(root.explanation().contains("agrees with"));
    assert_provenance_terminates(&g);
    // The platform site is metadata only.
    assert!(!g.nodes().values().any(|n| matches!(n, Node::Review(cr) if cr.item_reviewed().as_str() == "urn:site:twitter")));
}

#[test]
fn tweet_greeting_only() {
    let e = common::engine();
    let doc = parse_items(r#"{"@type": "SocialMediaPosting", "url": "https://twitter.com/a/status/2", "text": "Good morning everyone!"}"#).unwrap();
    let g = e.review_document(&doc).unwrap();
    let r = g.root_review().unwrap().rating();
    assert_eq!((r.value(), r.confidence()), (0.0, 0.0));
}

#[test]
fn tweet_linking_article() {
    let e = common::engine();
    let doc = parse_items(
        r#"{"@graph": [
          {"@id": "p", "@type": "SocialMediaPosting", "url": "https://twitter.com/a/status/3",
           "text": "Have a look at this one, friends.", "sharedContent": [{"@id": "a"}]},
          {"@id": "a", "@type": "Article", "url": "https://hoax-daily.example/story",
           "headline": "Shocking", "articleBody": "Unverifiable gossip about celebrities is spreading fast online."}
        ]}"#,
    )
    .unwrap();
    let g = e.review_document(&doc).unwrap();
    let article = e.review_article(doc.items.get(&NodeId::new("a")).unwrap()).unwrap();
    assert!(close(g.root_review().unwrap().rating().value(), article.rating().value()));
    assert!(close(g.root_review().unwrap().rating().value(), -0.8));
    assert_provenance_terminates(&g);
}

#[test]
fn linked_post_cycle_terminates() {
    let e = common::engine();
    let doc = parse_items(
        r#"{"root": {"@id": "p1"}, "@graph": [
          {"@id": "p1", "@type": "SocialMediaPosting", "text": "The moon is made of cheese.", "sharedContent": [{"@id": "p2"}]},
          {"@id": "p2", "@type": "SocialMediaPosting", "text": "Look here.", "sharedContent": [{"@id": "p1"}]}
        ]}"#,
    )
    .unwrap();
    let g = e.review_document(&doc).unwrap();
    assert_eq!(g.root_review().unwrap().rating().value(), -1.0);

    let shallow = common::engine_with(BotConfig { max_depth: 0, ..Default::default() });
    let g = shallow.review_document(&doc).unwrap();
    let root = g.root_review().unwrap();
    assert!(root.notes().iter().any(|x| x.contains("depth limit")), "{:?}", root.notes());
}

#[test]
fn graphs_are_deterministic_across_modes() {
    let doc = parse_items(TWEET).unwrap();
    let par = common::engine().review_document(&doc).unwrap();
    let seq = Engine::builder(Arc::new(common::store()))
        .clock(common::clock())
        .mode(ExecMode::Sequential)
        .build()
        .unwrap()
        .review_document(&doc)
        .unwrap();
    assert_eq!(serialize_jsonld(&par).unwrap(), serialize_jsonld(&seq).unwrap());
}

#[test]
fn unsupported_and_unregistered() {
    let e = common::engine();
    let s = DataItem::sentence("a b c d e").unwrap();
    let pair = DataItem::new(ItemKind::SentencePair { source: s.id().clone(), target: s.id().clone() }).unwrap();
    assert!(matches!(e.review(&pair), Err(BotError::Unsupported(_))));
    let bare = Engine::builder(Arc::new(common::store())).registry(Registry::empty()).build().unwrap();
    assert!(matches!(bare.review(&DataItem::claim("x").unwrap()), Err(BotError::NotRegistered(_))));
}

struct DownEncoder;

impl SentenceEncoder for DownEncoder {
    fn backend_id(&self) -> &str {
        "remote-test"
    }
    fn dim(&self) -> usize {
        8
    }
    fn encode_batch(&self, _: &[&str]) -> Result<Vec<SentenceVector>, NlpError> {
        Err(NlpError::Unavailable("connection refused".into()))
    }
}

fn down_engine(fallback: bool) -> Engine {
    Engine::builder(Arc::new(common::store()))
        .config(BotConfig { fallback_to_baseline: fallback, ..Default::default() })
        .backend(Arc::new(DownEncoder), Arc::new(BaselineStance), Arc::new(SentenceIndex::empty("remote-test", 8)))
        .clock(common::clock())
        .build()
        .unwrap()
}

#[test]
fn backend_outage_falls_back_to_baseline() {
    let r = down_engine(true).review_sentence_semsim(&DataItem::sentence("The moon is made of cheese.").unwrap()).unwrap();
    assert_eq!(rating(&r), (-1.0, 1.0));
    assert!(r.review.notes().iter().any(|n| n.starts_with("backend fallback")));

    let err = down_engine(false).review_sentence_semsim(&DataItem::sentence("The moon is made of cheese.").unwrap());
    assert!(matches!(err, Err(BotError::Backend { .. })));
}

#[test]
fn mismatched_index_is_refused() {
    let built = Engine::builder(Arc::new(common::store()))
        .backend(Arc::new(DownEncoder), Arc::new(BaselineStance), Arc::new(SentenceIndex::empty("other", 8)))
        .build();
    assert!(matches!(built, Err(BotError::Config(_))));
}

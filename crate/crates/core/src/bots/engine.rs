use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use chrono::{DateTime, Utc};

use super::{explain, segment, BotConfig, BotError, BotKind, Clock, Registry, Reviewed, NO_SIGNAL};
use crate::algebra::{
    caution_adjustment, combine_linked, least_credible, most_confident, CautionContext, Rated,
};
use crate::model::{
    normalize_domain, DataItem, GroundSignal, ItemDocument, ItemKind, LinkEvidence, Node, NodeId, Rating,
    ReviewDraft, ReviewGraph, SignalKind,
};
use crate::nlp::{
    BaselineStance, HashingEncoder, Match, NlpError, SentenceEncoder, SentenceIndex, StanceDetector,
    StanceJudgment, BASELINE_BACKEND_ID,
};
use crate::par::{self, ExecMode};
use crate::store::{SignalStore, TextKind};

/// Runs the bots in-process. Immutable once built; share it behind an `Arc`.
pub struct Engine {
    store: Arc<SignalStore>,
    registry: Registry,
    config: BotConfig,
    encoder: Arc<dyn SentenceEncoder>,
    stance: Arc<dyn StanceDetector>,
    index: Arc<SentenceIndex>,
    baseline_index: OnceLock<Arc<SentenceIndex>>,
    clock: Clock,
    mode: ExecMode,
}

type Backend = (Arc<dyn SentenceEncoder>, Arc<dyn StanceDetector>, Arc<SentenceIndex>);

pub struct EngineBuilder {
    store: Arc<SignalStore>,
    registry: Registry,
    config: BotConfig,
    backend: Option<Backend>,
    clock: Clock,
    mode: ExecMode,
}

impl EngineBuilder {
    pub fn registry(mut self, registry: Registry) -> Self {
        self.registry = registry;
        self
    }

    pub fn config(mut self, config: BotConfig) -> Self {
        self.config = config;
        self
    }

    /// Use these backends and an index built with `encoder`. Without this the
    /// baseline backends are used with an index built from the store.
    pub fn backend(
        mut self,
        encoder: Arc<dyn SentenceEncoder>,
        stance: Arc<dyn StanceDetector>,
        index: Arc<SentenceIndex>,
    ) -> Self {
        self.backend = Some((encoder, stance, index));
        self
    }

    pub fn clock(mut self, clock: Clock) -> Self {
        self.clock = clock;
        self
    }

    pub fn mode(mut self, mode: ExecMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn build(self) -> Result<Engine, BotError> {
        self.config.validate().map_err(BotError::Config)?;
        let (encoder, stance, index) = match self.backend {
            Some(b) => b,
            None => {
                let enc = HashingEncoder::new(self.mode);
                let index = SentenceIndex::build_from_store(&enc, &self.store).map_err(|source| BotError::Backend {
                    source,
                    partial: Vec::new(),
                })?;
                (
                    Arc::new(enc) as Arc<dyn SentenceEncoder>,
                    Arc::new(BaselineStance) as Arc<dyn StanceDetector>,
                    Arc::new(index),
                )
            }
        };
        if index.backend_id() != encoder.backend_id() || index.dim() != encoder.dim() {
            return Err(BotError::Config(format!(
                "index built with {} (d={}) but encoder is {} (d={})",
                index.backend_id(),
                index.dim(),
                encoder.backend_id(),
                encoder.dim()
            )));
        }
        Ok(Engine {
            store: self.store,
            registry: self.registry,
            config: self.config,
            encoder,
            stance,
            index,
            baseline_index: OnceLock::new(),
            clock: self.clock,
            mode: self.mode,
        })
    }
}

/// Per-request state.
struct Ctx<'a> {
    now: DateTime<Utc>,
    doc: &'a ItemDocument,
}

/// A part of a decomposed item, rated as it contributes to the whole.
struct Part {
    reviewed: Reviewed,
    rating: Rating,
    kind: PartKind,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PartKind {
    Sentence,
    Linked,
    Website,
}

impl Rated for Part {
    fn rating(&self) -> Rating {
        self.rating
    }
    fn key(&self) -> &str {
        self.reviewed.id().as_str()
    }
}

struct Pick<'a> {
    rating: Rating,
    signal: &'a GroundSignal,
}

impl Rated for Pick<'_> {
    fn rating(&self) -> Rating {
        self.rating
    }
    fn key(&self) -> &str {
        self.signal.id().as_str()
    }
}

fn backend_err(source: NlpError) -> BotError {
    BotError::Backend {
        source,
        partial: Vec::new(),
    }
}

fn rests_on_reviews(r: &Reviewed) -> bool {
    r.review
        .is_based_on()
        .iter()
        .any(|id| matches!(r.nodes.get(id), Some(Node::Review(_))))
}

/// Collect results; on a backend failure keep what succeeded as partial provenance.
fn collect(results: Vec<Result<Reviewed, BotError>>) -> Result<Vec<Reviewed>, BotError> {
    let mut ok = Vec::new();
    let mut failure = None;
    for r in results {
        match r {
            Ok(r) => ok.push(r),
            Err(e) if failure.is_none() => failure = Some(e),
            Err(_) => {}
        }
    }
    match failure {
        None => Ok(ok),
        Some(BotError::Backend { source, mut partial }) => {
            partial.extend(ok.into_iter().map(|r| r.review));
            Err(BotError::Backend { source, partial })
        }
        Some(e) => Err(e),
    }
}

impl Engine {
    pub fn builder(store: Arc<SignalStore>) -> EngineBuilder {
        EngineBuilder {
            store,
            registry: Registry::standard(),
            config: BotConfig::default(),
            backend: None,
            clock: Clock::System,
            mode: ExecMode::default(),
        }
    }

    pub fn store(&self) -> &SignalStore {
        &self.store
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn config(&self) -> &BotConfig {
        &self.config
    }

    pub fn index(&self) -> &SentenceIndex {
        &self.index
    }

    pub fn backend_id(&self) -> &str {
        self.encoder.backend_id()
    }

    /// Review the root item of a request document.
    pub fn review_document(&self, doc: &ItemDocument) -> Result<ReviewGraph, BotError> {
        for item in doc.items.values() {
            if let Some(r) = item.references().into_iter().find(|r| !doc.items.contains_key(*r)) {
                return Err(BotError::InvalidRequest(format!("{} references absent item {r}", item.id())));
            }
        }
        let ctx = Ctx {
            now: self.clock.now(),
            doc,
        };
        let reviewed = self.review_at(&ctx, doc.root_item(), 0)?;
        let root = reviewed.id().clone();
        let mut nodes = reviewed.nodes;
        nodes.insert(root.clone(), Node::Review(reviewed.review));
        for item in doc.items.values() {
            nodes.entry(item.id().clone()).or_insert_with(|| Node::Item(item.clone()));
        }
        let graph = ReviewGraph::new(root, nodes.into_values());
        let violations = crate::model::validate_graph(&graph);
        if !violations.is_empty() {
            return Err(BotError::Model(crate::model::ModelError::Invalid(violations)));
        }
        Ok(graph)
    }

    /// Review a single item with the bot registered for its type.
    pub fn review(&self, item: &DataItem) -> Result<Reviewed, BotError> {
        let doc = ItemDocument::single(item.clone());
        let ctx = Ctx {
            now: self.clock.now(),
            doc: &doc,
        };
        self.review_at(&ctx, item, 0)
    }

    fn with_ctx<T>(&self, item: &DataItem, f: impl FnOnce(&Ctx) -> T) -> T {
        let doc = ItemDocument::single(item.clone());
        f(&Ctx {
            now: self.clock.now(),
            doc: &doc,
        })
    }

    pub fn review_claim(&self, item: &DataItem) -> Result<Reviewed, BotError> {
        self.with_ctx(item, |c| self.claim(c, item))
    }

    pub fn review_website(&self, item: &DataItem) -> Result<Reviewed, BotError> {
        self.with_ctx(item, |c| self.website(c, item))
    }

    pub fn review_sentence_precrawled(&self, item: &DataItem) -> Result<Option<Reviewed>, BotError> {
        self.with_ctx(item, |c| self.precrawled(c, item))
    }

    pub fn review_sentence_semsim(&self, item: &DataItem) -> Result<Reviewed, BotError> {
        self.with_ctx(item, |c| self.semsim(c, item))
    }

    pub fn review_article(&self, item: &DataItem) -> Result<Reviewed, BotError> {
        self.with_ctx(item, |c| self.article(c, item, 0))
    }

    pub fn review_social_post(&self, item: &DataItem) -> Result<Reviewed, BotError> {
        self.with_ctx(item, |c| self.social_post(c, item, 0))
    }

    fn review_at(&self, ctx: &Ctx, item: &DataItem, depth: usize) -> Result<Reviewed, BotError> {
        match item.kind() {
            ItemKind::Claim { .. } => self.claim(ctx, item),
            ItemKind::Sentence { .. } => self.semsim(ctx, item),
            ItemKind::WebSite { .. } => self.website(ctx, item),
            ItemKind::Article { .. } => self.article(ctx, item, depth),
            ItemKind::SocialMediaPost { .. } => self.social_post(ctx, item, depth),
            ItemKind::SentencePair { .. } => Err(BotError::Unsupported(item.kind().type_name().into())),
        }
    }

    fn bot_id(&self, kind: BotKind) -> Result<NodeId, BotError> {
        self.registry
            .get(kind.name())
            .map(|b| b.id().clone())
            .ok_or(BotError::NotRegistered(kind.name()))
    }

    fn draft(&self, ctx: &Ctx, kind: BotKind, item: &DataItem, rating: Rating) -> Result<ReviewDraft, BotError> {
        Ok(ReviewDraft::new(item.id().clone(), rating, self.bot_id(kind)?, ctx.now))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        &self,
        kind: BotKind,
        item: &DataItem,
        mut draft: ReviewDraft,
        subject: String,
        predicate: String,
        children: Vec<Reviewed>,
        signals: Vec<&GroundSignal>,
        nested: bool,
    ) -> Result<Reviewed, BotError> {
        let headline = format!("{subject} {predicate}");
        let bullets: Vec<(&str, bool)> = if nested {
            children.iter().map(|c| (c.headline.as_str(), rests_on_reviews(c))).collect()
        } else {
            Vec::new()
        };
        draft.explanation = explain::compose(&headline, &bullets);
        let review = draft.build()?;
        let mut nodes = BTreeMap::new();
        nodes.insert(item.id().clone(), Node::Item(item.clone()));
        for c in children {
            nodes.extend(c.nodes);
            nodes.insert(c.review.id().clone(), Node::Review(c.review));
        }
        for s in signals {
            nodes.insert(s.id().clone(), Node::Signal(s.clone()));
        }
        for b in self.registry.closure(kind.name()) {
            nodes.insert(b.id().clone(), Node::Bot(b.clone()));
        }
        Ok(Reviewed {
            review,
            nodes,
            headline,
            predicate,
        })
    }

    fn no_signal(
        &self,
        ctx: &Ctx,
        kind: BotKind,
        item: &DataItem,
        what: &str,
        notes: Vec<String>,
    ) -> Result<Reviewed, BotError> {
        let mut draft = self.draft(ctx, kind, item, Rating::NONE)?;
        draft.notes.push(NO_SIGNAL.into());
        draft.notes.extend(notes);
        self.assemble(kind, item, draft, explain::subject(item), explain::no_signal(what), vec![], vec![], false)
    }

    fn claim(&self, ctx: &Ctx, item: &DataItem) -> Result<Reviewed, BotError> {
        let kind = BotKind::ClaimReview;
        let text = match item.kind() {
            ItemKind::Claim { text } | ItemKind::Sentence { text } => text,
            other => return Err(BotError::Unsupported(other.type_name().into())),
        };
        let picks: Vec<Pick> = self
            .store
            .lookup_claim(text)
            .into_iter()
            .filter_map(|s| s.rating().map(|rating| Pick { rating, signal: s }))
            .collect();
        if picks.is_empty() {
            return self.no_signal(ctx, kind, item, "no fact-check found", vec![]);
        }
        let best = most_confident(&picks)?;
        let draft = self.draft(ctx, kind, item, best.rating)?.based_on(best.signal.id().clone());
        let predicate = explain::fact_check(best.rating, best.signal);
        self.assemble(kind, item, draft, explain::subject(item), predicate, vec![], vec![best.signal], false)
    }

    fn website(&self, ctx: &Ctx, item: &DataItem) -> Result<Reviewed, BotError> {
        let kind = BotKind::WebSite;
        let ItemKind::WebSite { domain } = item.kind() else {
            return Err(BotError::Unsupported(item.kind().type_name().into()));
        };
        let mut signals: Vec<&GroundSignal> = self.store.lookup_website(domain);
        signals.sort_by(|a, b| a.id().cmp(b.id()));
        signals.dedup_by(|a, b| a.id() == b.id());
        let ratings: Vec<Rating> = signals.iter().filter_map(|s| s.rating()).collect();
        if ratings.is_empty() {
            return self.no_signal(ctx, kind, item, "no reputation record found", vec![]);
        }
        let rating = aggregate_site(&ratings, self.config.site_confidence_cap);
        let mut draft = self.draft(ctx, kind, item, rating)?;
        draft.is_based_on = signals.iter().map(|s| s.id().clone()).collect();
        let predicate = explain::website(rating, &signals);
        self.assemble(kind, item, draft, explain::subject(item), predicate, vec![], signals, false)
    }

    /// The website item for `domain`: the request's own item when it supplied one.
    fn site_item(&self, ctx: &Ctx, website: Option<&NodeId>, url: &str) -> Result<Option<DataItem>, BotError> {
        if let Some(item) = website.and_then(|id| ctx.doc.items.get(id)) {
            return Ok(match item.kind() {
                ItemKind::WebSite { domain } if !self.config.is_platform(domain) => Some(item.clone()),
                _ => None,
            });
        }
        if url.is_empty() {
            return Ok(None);
        }
        match normalize_domain(url) {
            Ok(d) if !self.config.is_platform(&d) => Ok(Some(DataItem::website(&d)?)),
            _ => Ok(None),
        }
    }

    fn precrawled(&self, ctx: &Ctx, item: &DataItem) -> Result<Option<Reviewed>, BotError> {
        let kind = BotKind::PreCrawled;
        let text = match item.kind() {
            ItemKind::Sentence { text } | ItemKind::Claim { text } => text,
            other => return Err(BotError::Unsupported(other.type_name().into())),
        };
        let mut candidates = Vec::new();
        for signal in self.store.lookup_precrawled(text) {
            let SignalKind::PrecrawledSentence { source_domain, .. } = signal.kind() else {
                continue;
            };
            let site = self.website(ctx, &DataItem::website(source_domain)?)?;
            let sr = site.rating();
            let rating = Rating::new(sr.value(), sr.confidence() * self.config.precrawl_decay)?;
            let draft = self
                .draft(ctx, kind, item, rating)?
                .based_on(signal.id().clone())
                .based_on(site.id().clone());
            let predicate = explain::precrawled(rating, source_domain);
            candidates.push(self.assemble(
                kind,
                item,
                draft,
                explain::subject(item),
                predicate,
                vec![site],
                vec![signal],
                true,
            )?);
        }
        if candidates.is_empty() {
            return Ok(None);
        }
        let best = most_confident(&candidates)?.id().clone();
        Ok(candidates.into_iter().find(|c| c.id() == &best))
    }

    fn baseline_index(&self) -> Result<Arc<SentenceIndex>, BotError> {
        if self.index.backend_id() == BASELINE_BACKEND_ID {
            return Ok(self.index.clone());
        }
        if let Some(idx) = self.baseline_index.get() {
            return Ok(idx.clone());
        }
        let built = SentenceIndex::build_from_store(&HashingEncoder::new(self.mode), &self.store).map_err(backend_err)?;
        Ok(self.baseline_index.get_or_init(|| Arc::new(built)).clone())
    }

    fn fallback_allowed(&self, e: &NlpError) -> bool {
        self.config.fallback_to_baseline
            && matches!(
                e,
                NlpError::Unavailable(_) | NlpError::Backend(_) | NlpError::DimensionMismatch { .. }
            )
    }

    /// Nearest matches for `text`, falling back to the baseline encoder.
    fn search(&self, text: &str, notes: &mut Vec<String>) -> Result<Vec<Match>, BotError> {
        let cfg = &self.config;
        match self.encoder.encode(text) {
            Ok(q) => self.index.nearest(&q, cfg.k, cfg.sim_floor, self.mode).map_err(backend_err),
            Err(e) if self.fallback_allowed(&e) => {
                tracing::warn!(error = %e, "encoder failed, using baseline");
                notes.push(format!("backend fallback: encoder failed ({e}); baseline encoder used"));
                let q = HashingEncoder::new(self.mode).encode(text).map_err(backend_err)?;
                self.baseline_index()?.nearest(&q, cfg.k, cfg.sim_floor, self.mode).map_err(backend_err)
            }
            Err(e) => Err(backend_err(e)),
        }
    }

    fn stances(&self, text: &str, matches: &[Match], notes: &mut Vec<String>) -> Result<Vec<StanceJudgment>, BotError> {
        let pairs: Vec<(&str, &str)> = matches.iter().map(|m| (text, m.text.as_str())).collect();
        match self.stance.stance_batch(&pairs) {
            Ok(j) => Ok(j),
            Err(e) if self.fallback_allowed(&e) => {
                tracing::warn!(error = %e, "stance detector failed, using baseline");
                notes.push(format!("backend fallback: stance detector failed ({e}); baseline stance used"));
                BaselineStance.stance_batch(&pairs).map_err(backend_err)
            }
            Err(e) => Err(backend_err(e)),
        }
    }

    fn semsim(&self, ctx: &Ctx, item: &DataItem) -> Result<Reviewed, BotError> {
        let kind = BotKind::SemSim;
        let ItemKind::Sentence { text } = item.kind() else {
            return Err(BotError::Unsupported(item.kind().type_name().into()));
        };
        self.bot_id(kind)?;
        let mut notes = Vec::new();
        let matches = self.search(text, &mut notes)?;
        if matches.is_empty() {
            return self.no_signal(ctx, kind, item, "no similar fact-checked or crawled sentence found", notes);
        }
        let judgments = self.stances(text, &matches, &mut notes)?;
        let mut pool = Vec::new();
        for (m, j) in matches.iter().zip(judgments) {
            let neighbor = match m.kind {
                TextKind::Claim => self.claim(ctx, &DataItem::claim(m.text.clone())?)?,
                TextKind::Sentence => match self.precrawled(ctx, &DataItem::sentence(m.text.clone())?)? {
                    Some(r) => r,
                    None => continue,
                },
            };
            if !neighbor.has_signal() {
                continue;
            }
            let mut rating = combine_linked(neighbor.rating(), j.label, m.similarity, &self.config.multipliers)?;
            let mut draft_notes = notes.clone();
            if let Some((adjusted, note)) =
                caution_adjustment(rating, CautionContext::LinkedStance(j.label), &self.config.caution)
            {
                rating = adjusted;
                draft_notes.push(note);
            }
            let mut draft = self
                .draft(ctx, kind, item, rating)?
                .based_on(neighbor.id().clone())
                .link(LinkEvidence {
                    stance: j.label,
                    similarity: m.similarity,
                });
            draft.notes = draft_notes;
            let predicate = explain::linked(rating, j.label, &m.text, &neighbor.predicate);
            pool.push(self.assemble(kind, item, draft, explain::subject(item), predicate, vec![neighbor], vec![], false)?);
        }
        if pool.is_empty() {
            return self.no_signal(ctx, kind, item, "no similar sentence has a credibility review", notes);
        }
        let best = most_confident(&pool)?.id().clone();
        Ok(pool.into_iter().find(|r| r.id() == &best).expect("selected from pool"))
    }

    fn sentence_parts(&self, ctx: &Ctx, sentences: &[String]) -> Result<Vec<Part>, BotError> {
        let reviewed = collect(par::map(self.mode, sentences, |s| {
            let item = DataItem::sentence(s.clone())?;
            self.semsim(ctx, &item)
        }))?;
        Ok(reviewed
            .into_iter()
            .filter(Reviewed::has_signal)
            .map(|r| Part {
                rating: r.rating(),
                reviewed: r,
                kind: PartKind::Sentence,
            })
            .collect())
    }

    fn website_part(&self, ctx: &Ctx, site: Option<DataItem>) -> Result<Option<Part>, BotError> {
        let Some(site) = site else { return Ok(None) };
        let reviewed = self.website(ctx, &site)?;
        if !reviewed.has_signal() {
            return Ok(None);
        }
        let r = reviewed.rating();
        Ok(Some(Part {
            rating: Rating::new(r.value(), r.confidence() * self.config.precrawl_decay)?,
            reviewed,
            kind: PartKind::Website,
        }))
    }

    /// Pick the least credible part and wrap it as the review of `item`.
    fn decompose(
        &self,
        ctx: &Ctx,
        kind: BotKind,
        item: &DataItem,
        parts: Vec<Part>,
        mut notes: Vec<String>,
        sentence_subject: Option<&dyn Fn(&str) -> String>,
    ) -> Result<Reviewed, BotError> {
        if parts.is_empty() {
            return self.no_signal(ctx, kind, item, "no reviewable part found", notes);
        }
        let chosen = least_credible(&parts, self.config.least_credible_floor)?.key().to_string();
        let part = parts
            .into_iter()
            .find(|p| p.reviewed.id().as_str() == chosen)
            .expect("selected from parts");
        let mut rating = part.rating;
        if part.kind == PartKind::Website {
            if let Some((adjusted, note)) =
                caution_adjustment(rating, CautionContext::ArticleWebsiteOnly, &self.config.caution)
            {
                rating = adjusted;
                notes.push(note);
            }
        }
        let mut draft = self.draft(ctx, kind, item, rating)?.based_on(part.reviewed.id().clone());
        draft.notes = notes;
        let sentence_text = match part.reviewed.nodes.get(part.reviewed.review.item_reviewed()) {
            Some(Node::Item(i)) => i.text().map(str::to_owned),
            _ => None,
        };
        let (subject, predicate, nested) = match (part.kind, sentence_subject, sentence_text) {
            (PartKind::Sentence, Some(f), Some(s)) => (f(&s), part.reviewed.predicate.clone(), false),
            (PartKind::Sentence, _, _) => (explain::subject(item), explain::decomposed(rating, "sentence"), true),
            (PartKind::Linked, _, _) => (explain::subject(item), explain::decomposed(rating, "linked item"), true),
            (PartKind::Website, _, _) => (
                explain::subject(item),
                format!("{} based only on the site it was published in", explain::seems(rating)),
                true,
            ),
        };
        self.assemble(kind, item, draft, subject, predicate, vec![part.reviewed], vec![], nested)
    }

    fn article(&self, ctx: &Ctx, item: &DataItem, _depth: usize) -> Result<Reviewed, BotError> {
        let kind = BotKind::Article;
        let ItemKind::Article {
            url,
            title,
            body_text,
            website,
        } = item.kind()
        else {
            return Err(BotError::Unsupported(item.kind().type_name().into()));
        };
        self.bot_id(kind)?;
        let cfg = &self.config;
        let mut sentences = segment::segment(title, cfg.min_sentence_tokens, cfg.max_sentence_tokens);
        for s in segment::segment(body_text, cfg.min_sentence_tokens, cfg.max_sentence_tokens) {
            if !sentences.contains(&s) {
                sentences.push(s);
            }
        }
        let site = self.website_part(ctx, self.site_item(ctx, website.as_ref(), url)?)?;
        let mut parts = match self.sentence_parts(ctx, &sentences) {
            Ok(p) => p,
            Err(BotError::Backend { source, mut partial }) => {
                partial.extend(site.map(|p| p.reviewed.review));
                return Err(BotError::Backend { source, partial });
            }
            Err(e) => return Err(e),
        };
        parts.extend(site);
        self.decompose(ctx, kind, item, parts, vec![], None)
    }

    fn social_post(&self, ctx: &Ctx, item: &DataItem, depth: usize) -> Result<Reviewed, BotError> {
        let kind = BotKind::SocialMedia;
        let ItemKind::SocialMediaPost {
            url,
            text,
            linked_items,
            website,
        } = item.kind()
        else {
            return Err(BotError::Unsupported(item.kind().type_name().into()));
        };
        self.bot_id(kind)?;
        let cfg = &self.config;
        let sentences = segment::segment(&segment::strip_urls(text), cfg.min_sentence_tokens, cfg.max_sentence_tokens);
        let mut parts = self.sentence_parts(ctx, &sentences)?;
        let mut notes = Vec::new();
        let mut linked = Vec::new();
        for id in linked_items {
            let Some(linked_item) = ctx.doc.items.get(id) else {
                notes.push(format!("linked item {id} not supplied"));
                continue;
            };
            if depth + 1 > cfg.max_depth {
                notes.push(format!("depth limit {} reached: linked item {id} not reviewed", cfg.max_depth));
                continue;
            }
            linked.push(linked_item);
        }
        let reviewed = collect(par::map(self.mode, &linked, |li| self.review_at(ctx, li, depth + 1)))?;
        parts.extend(reviewed.into_iter().filter(Reviewed::has_signal).map(|r| Part {
            rating: r.rating(),
            reviewed: r,
            kind: PartKind::Linked,
        }));
        parts.extend(self.website_part(ctx, self.site_item(ctx, website.as_ref(), url)?)?);
        let post_link = if url.is_empty() { "post".to_string() } else { format!("[post]({url})") };
        let subject = move |s: &str| format!("Sentence {} in {post_link}", explain::code(s));
        self.decompose(ctx, kind, item, parts, notes, Some(&subject))
    }
}

/// Confidence-weighted mean value; noisy-or confidence, capped.
pub(crate) fn aggregate_site(ratings: &[Rating], cap: f64) -> Rating {
    let weight: f64 = ratings.iter().map(|r| r.confidence()).sum();
    let value = if weight > 0.0 {
        ratings.iter().map(|r| r.value() * r.confidence()).sum::<f64>() / weight
    } else {
        ratings.iter().map(|r| r.value()).sum::<f64>() / ratings.len() as f64
    };
    let miss: f64 = ratings.iter().map(|r| 1.0 - r.confidence()).product();
    let confidence = (1.0 - miss).min(cap);
    Rating::new(value.clamp(-1.0, 1.0), confidence.clamp(0.0, 1.0)).expect("clamped into range")
}

use serde::{Deserialize, Serialize};

use crate::algebra::{CautionConfig, ReviseMultipliers};

/// Tunable constants shared by all bots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BotConfig {
    /// Minimum similarity for a nearest-neighbour match.
    pub sim_floor: f64,
    /// Matches retrieved per sentence.
    pub k: usize,
    pub multipliers: ReviseMultipliers,
    /// Confidence decay from a website rating to a sentence or article part (β).
    pub precrawl_decay: f64,
    /// Confidence floor θ for least-credible selection.
    pub least_credible_floor: f64,
    pub caution: CautionConfig,
    /// Upper bound on aggregated website confidence.
    pub site_confidence_cap: f64,
    /// Recursion limit for linked content.
    pub max_depth: usize,
    pub min_sentence_tokens: usize,
    pub max_sentence_tokens: usize,
    /// Domains never rated as websites (social platforms, link shorteners).
    pub platform_domains: Vec<String>,
    /// Use the baseline backend when the configured one is unreachable.
    pub fallback_to_baseline: bool,
}

impl Default for BotConfig {
    fn default() -> Self {
        BotConfig {
            sim_floor: 0.6,
            k: 5,
            multipliers: ReviseMultipliers::default(),
            precrawl_decay: 0.8,
            least_credible_floor: 0.5,
            caution: CautionConfig::default(),
            site_confidence_cap: 0.95,
            max_depth: 2,
            min_sentence_tokens: 5,
            max_sentence_tokens: 60,
            platform_domains: [
                "twitter.com",
                "x.com",
                "t.co",
                "facebook.com",
                "instagram.com",
                "youtube.com",
                "reddit.com",
                "tiktok.com",
            ]
            .map(String::from)
            .to_vec(),
            fallback_to_baseline: true,
        }
    }
}

impl BotConfig {
    pub fn validate(&self) -> Result<(), String> {
        let unit = [
            ("sim_floor", self.sim_floor),
            ("precrawl_decay", self.precrawl_decay),
            ("least_credible_floor", self.least_credible_floor),
            ("site_confidence_cap", self.site_confidence_cap),
        ];
        for (name, v) in unit {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("{name} is {v}, expected [0, 1]"));
            }
        }
        if self.k == 0 {
            return Err("k must be at least 1".into());
        }
        if self.min_sentence_tokens == 0 || self.min_sentence_tokens > self.max_sentence_tokens {
            return Err(format!(
                "sentence token bounds [{}, {}] are empty",
                self.min_sentence_tokens, self.max_sentence_tokens
            ));
        }
        self.multipliers.validate()?;
        self.caution.validate()
    }

    /// Whether `domain` or one of its parents is a platform domain.
    pub fn is_platform(&self, domain: &str) -> bool {
        self.platform_domains
            .iter()
            .any(|p| domain == p || domain.strip_suffix(p.as_str()).is_some_and(|rest| rest.ends_with('.')))
    }

    pub fn from_toml(text: &str) -> Result<Self, String> {
        let cfg: BotConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        cfg.validate()?;
        Ok(cfg)
    }
}

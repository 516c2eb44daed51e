//! Blocking HTTP access with a process-wide rate-limit gate.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

pub const DEFAULT_REGISTRY: &str = "https://crates.io";
pub const DEFAULT_USER_AGENT: &str = "crate2bib-cli (contact: <none>)";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("user agent must not be empty")]
    EmptyUserAgent,
    #[error("invalid base url {0:?}")]
    BadBaseUrl(String),
}

/// Connection settings shared by registry and repository requests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClientConfig {
    base_url: String,
    user_agent: String,
    pub min_request_interval: Duration,
    pub timeout: Duration,
}

impl ClientConfig {
    pub fn new(user_agent: &str) -> Result<Self, ConfigError> {
        Self::default().with_user_agent(user_agent)
    }

    pub fn with_user_agent(mut self, user_agent: &str) -> Result<Self, ConfigError> {
        if user_agent.trim().is_empty() {
            return Err(ConfigError::EmptyUserAgent);
        }
        self.user_agent = user_agent.to_string();
        Ok(self)
    }

    /// Trailing slashes are dropped.
    pub fn with_base_url(mut self, base_url: &str) -> Result<Self, ConfigError> {
        let parsed = url::Url::parse(base_url)
            .map_err(|_| ConfigError::BadBaseUrl(base_url.to_string()))?;
        if !matches!(parsed.scheme(), "http" | "https") || parsed.host_str().is_none() {
            return Err(ConfigError::BadBaseUrl(base_url.to_string()));
        }
        self.base_url = base_url.trim_end_matches('/').to_string();
        Ok(self)
    }

    pub fn with_min_request_interval(mut self, interval: Duration) -> Self {
        self.min_request_interval = interval;
        self
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }

    pub fn user_agent(&self) -> &str {
        &self.user_agent
    }
}

impl Default for ClientConfig {
    fn default() -> Self {
        Self {
            base_url: DEFAULT_REGISTRY.to_string(),
            user_agent: DEFAULT_USER_AGENT.to_string(),
            min_request_interval: Duration::from_millis(1000),
            timeout: Duration::from_millis(10_000),
        }
    }
}

/// Status and body of a completed GET.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub status: u16,
    pub body: Vec<u8>,
}

/// The request never produced a status line.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("request to {url} failed: {reason}")]
pub struct TransportError {
    pub url: String,
    pub reason: String,
}

/// Something that can perform a GET. Implemented by [`HttpFetcher`] and by
/// test doubles.
pub trait Fetch: Send + Sync {
    fn get(&self, url: &str) -> Result<Response, TransportError>;
}

impl<F: Fetch + ?Sized> Fetch for Arc<F> {
    fn get(&self, url: &str) -> Result<Response, TransportError> {
        (**self).get(url)
    }
}

/// Spaces request starts to the same origin at least `interval` apart,
/// using the monotonic clock. The lock is held while sleeping, so all
/// request starts through one gate are serialized.
#[derive(Debug, Default)]
pub struct RateGate {
    last_start: Mutex<HashMap<String, Instant>>,
}

impl RateGate {
    pub fn new() -> Self {
        Self::default()
    }

    /// The gate shared by every [`HttpFetcher`] built with
    /// [`HttpFetcher::new`].
    pub fn global() -> Arc<RateGate> {
        static GLOBAL: OnceLock<Arc<RateGate>> = OnceLock::new();
        GLOBAL.get_or_init(|| Arc::new(RateGate::new())).clone()
    }

    /// Blocks until a request to `origin` may start, then records the start.
    pub fn wait(&self, origin: &str, interval: Duration) {
        let mut starts = self.last_start.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(last) = starts.get(origin) {
            let ready = *last + interval;
            let now = Instant::now();
            if ready > now {
                std::thread::sleep(ready - now);
            }
        }
        starts.insert(origin.to_string(), Instant::now());
    }
}

/// `scheme://host:port` of a URL, or the whole string if it does not parse.
pub fn origin_of(url: &str) -> String {
    match url::Url::parse(url) {
        Ok(u) => u.origin().ascii_serialization(),
        Err(_) => url.to_string(),
    }
}

/// reqwest-backed fetcher sending the configured User-Agent.
pub struct HttpFetcher {
    client: reqwest::blocking::Client,
    gate: Arc<RateGate>,
    interval: Duration,
}

impl HttpFetcher {
    pub fn new(config: &ClientConfig) -> Result<Self, TransportError> {
        Self::with_gate(config, RateGate::global())
    }

    pub fn with_gate(config: &ClientConfig, gate: Arc<RateGate>) -> Result<Self, TransportError> {
        let client = reqwest::blocking::Client::builder()
            .user_agent(config.user_agent())
            .timeout(config.timeout)
            .build()
            .map_err(|e| TransportError {
                url: config.base_url().to_string(),
                reason: e.to_string(),
            })?;
        Ok(Self {
            client,
            gate,
            interval: config.min_request_interval,
        })
    }
}

impl Fetch for HttpFetcher {
    fn get(&self, url: &str) -> Result<Response, TransportError> {
        let fail = |e: reqwest::Error| TransportError {
            url: url.to_string(),
            reason: e.to_string(),
        };
        self.gate.wait(&origin_of(url), self.interval);
        let resp = self.client.get(url).send().map_err(fail)?;
        let status = resp.status().as_u16();
        let body = resp.bytes().map_err(fail)?.to_vec();
        Ok(Response { status, body })
    }
}

/// Serves recorded responses from memory and logs every requested URL.
/// URLs without a recording answer 404.
#[derive(Debug, Default)]
pub struct FixtureFetcher {
    routes: HashMap<String, Response>,
    log: Mutex<Vec<String>>,
}

impl FixtureFetcher {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, url: &str, status: u16, body: impl Into<Vec<u8>>) -> Self {
        self.routes.insert(
            url.to_string(),
            Response {
                status,
                body: body.into(),
            },
        );
        self
    }

    pub fn requests(&self) -> Vec<String> {
        self.log.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }
}

impl Fetch for FixtureFetcher {
    fn get(&self, url: &str) -> Result<Response, TransportError> {
        self.log
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .push(url.to_string());
        Ok(self.routes.get(url).cloned().unwrap_or(Response {
            status: 404,
            body: Vec::new(),
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults() {
        let c = ClientConfig::default();
        assert_eq!(c.base_url(), "https://crates.io");
        assert_eq!(c.min_request_interval, Duration::from_millis(1000));
        assert_eq!(c.timeout, Duration::from_millis(10_000));
        assert!(!c.user_agent().is_empty());
    }

    #[test]
    fn config_validation() {
        assert_eq!(ClientConfig::new("  "), Err(ConfigError::EmptyUserAgent));
        assert!(ClientConfig::default().with_base_url("not a url").is_err());
        assert!(ClientConfig::default().with_base_url("ftp://x.org").is_err());
        let c = ClientConfig::default().with_base_url("http://127.0.0.1:9/").unwrap();
        assert_eq!(c.base_url(), "http://127.0.0.1:9");
    }

    #[test]
    fn origins() {
        assert_eq!(origin_of("https://crates.io/api/v1/crates/x"), "https://crates.io");
        assert_eq!(origin_of("http://127.0.0.1:8080/a"), "http://127.0.0.1:8080");
    }

    #[test]
    fn gate_spaces_same_origin_only() {
        let gate = RateGate::new();
        let interval = Duration::from_millis(40);
        let t0 = Instant::now();
        gate.wait("a", interval);
        gate.wait("b", interval);
        assert!(t0.elapsed() < interval);
        gate.wait("a", interval);
        assert!(t0.elapsed() >= interval);
    }
}

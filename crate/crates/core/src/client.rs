use std::sync::Arc;

use crate::cache::{Cache, Fetched};
use crate::error::Result;
use crate::http::{ClientConfig, Fetch, HttpFetcher};
use crate::registry::{self, PackageMeta};

/// Connection settings, transport and cache bundled together. Every network
/// access in the crate goes through [`Client::get`].
#[derive(Clone)]
pub struct Client {
    config: ClientConfig,
    fetcher: Arc<dyn Fetch>,
    cache: Cache,
}

impl Client {
    /// A client backed by [`HttpFetcher`] and the global rate-limit gate.
    pub fn new(config: ClientConfig, cache: Cache) -> Result<Self> {
        let fetcher = Arc::new(HttpFetcher::new(&config)?);
        Ok(Self::with_fetcher(config, cache, fetcher))
    }

    pub fn with_fetcher(config: ClientConfig, cache: Cache, fetcher: Arc<dyn Fetch>) -> Self {
        Self {
            config,
            fetcher,
            cache,
        }
    }

    pub fn config(&self) -> &ClientConfig {
        &self.config
    }

    pub fn cache(&self) -> &Cache {
        &self.cache
    }

    /// GET through the cache.
    pub fn get(&self, url: &str) -> Result<Fetched> {
        Ok(self.cache.fetch_with(url, self.fetcher.as_ref())?)
    }

    pub fn fetch_package_meta(&self, name: &str) -> Result<PackageMeta> {
        registry::fetch_package_meta(self, name)
    }
}

impl std::fmt::Debug for Client {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Client")
            .field("config", &self.config)
            .field("cache", &self.cache)
            .finish_non_exhaustive()
    }
}

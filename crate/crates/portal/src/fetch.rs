//! HTTP(S) retrieval of feed bytes with redirect following and Basic
//! authentication from a [`CredentialStore`].

use std::time::Duration;

use reqwest::header::{CONTENT_TYPE, LOCATION};
use reqwest::StatusCode;
use thiserror::Error;
use url::Url;
use voxfeed_core::feed::CredentialStore;

pub const MAX_REDIRECTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchConfig {
    pub connect_timeout: Duration,
    /// Budget for the whole fetch, redirects and auth retry included.
    pub total_timeout: Duration,
}

impl Default for FetchConfig {
    fn default() -> Self {
        Self {
            connect_timeout: Duration::from_secs(15),
            total_timeout: Duration::from_secs(30),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FetchError {
    #[error("unsupported URL scheme {0:?} (expected http or https)")]
    UnsupportedScheme(String),
    #[error("network error fetching {url}: {message}")]
    Network { url: String, message: String },
    #[error("authentication required for {url}")]
    AuthRequired { url: String },
    #[error("HTTP status {status} from {url}")]
    Http { url: String, status: u16 },
    #[error("more than {MAX_REDIRECTS} redirects starting at {url}")]
    RedirectLoop { url: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawFetch {
    pub final_url: Url,
    pub status: u16,
    pub content_type: String,
    pub body: Vec<u8>,
    pub used_auth: bool,
}

#[derive(Debug, Clone)]
pub struct Fetcher {
    client: reqwest::Client,
    config: FetchConfig,
}

impl Fetcher {
    pub fn new(config: FetchConfig) -> Result<Self, FetchError> {
        let client = reqwest::Client::builder()
            .redirect(reqwest::redirect::Policy::none())
            .connect_timeout(config.connect_timeout)
            .timeout(config.total_timeout)
            .user_agent(concat!("voxfeed/", env!("CARGO_PKG_VERSION")))
            .build()
            .map_err(|e| FetchError::Network {
                url: String::new(),
                message: e.to_string(),
            })?;
        Ok(Self { client, config })
    }

    pub fn config(&self) -> &FetchConfig {
        &self.config
    }

    /// GETs `url`. A 401 is retried once per hop with the credential whose
    /// prefix matches that hop's URL; credentials are never sent
    /// unprompted or to a URL they do not cover.
    pub async fn fetch(&self, url: &Url, store: &CredentialStore) -> Result<RawFetch, FetchError> {
        match tokio::time::timeout(self.config.total_timeout, self.fetch_inner(url, store)).await {
            Ok(r) => r,
            Err(_) => Err(FetchError::Network {
                url: url.to_string(),
                message: "timed out".into(),
            }),
        }
    }

    async fn fetch_inner(&self, url: &Url, store: &CredentialStore) -> Result<RawFetch, FetchError> {
        let mut current = without_userinfo(url)?;
        let mut used_auth = false;
        let mut redirects = 0;
        loop {
            let mut response = self.get(&current, None).await?;
            if response.status() == StatusCode::UNAUTHORIZED {
                let Some(cred) = store.resolve(&current) else {
                    return Err(FetchError::AuthRequired { url: current.to_string() });
                };
                tracing::debug!(url = %current, "retrying with stored credential");
                response = self.get(&current, Some((cred.username(), cred.password()))).await?;
                used_auth = true;
                if response.status() == StatusCode::UNAUTHORIZED {
                    return Err(FetchError::AuthRequired { url: current.to_string() });
                }
            }

            let status = response.status();
            if status.is_redirection() {
                if let Some(next) = redirect_target(&current, &response)? {
                    redirects += 1;
                    if redirects > MAX_REDIRECTS {
                        return Err(FetchError::RedirectLoop { url: url.to_string() });
                    }
                    tracing::debug!(from = %current, to = %next, "following redirect");
                    current = next;
                    continue;
                }
            }
            if !status.is_success() {
                return Err(FetchError::Http {
                    url: current.to_string(),
                    status: status.as_u16(),
                });
            }

            let content_type = response
                .headers()
                .get(CONTENT_TYPE)
                .and_then(|v| v.to_str().ok())
                .unwrap_or_default()
                .to_string();
            let body = response.bytes().await.map_err(|e| network(&current, e))?.to_vec();
            tracing::debug!(url = %current, status = status.as_u16(), bytes = body.len(), used_auth, "fetched");
            return Ok(RawFetch {
                final_url: current,
                status: status.as_u16(),
                content_type,
                body,
                used_auth,
            });
        }
    }

    async fn get(&self, url: &Url, auth: Option<(&str, &str)>) -> Result<reqwest::Response, FetchError> {
        let mut request = self.client.get(url.clone());
        if let Some((user, pass)) = auth {
            request = request.basic_auth(user, Some(pass));
        }
        request.send().await.map_err(|e| network(url, e))
    }
}

fn network(url: &Url, e: reqwest::Error) -> FetchError {
    // reqwest's Display repeats the URL; keep only the cause chain.
    let e = e.without_url();
    let mut message = e.to_string();
    let mut source = std::error::Error::source(&e);
    while let Some(s) = source {
        message.push_str(": ");
        message.push_str(&s.to_string());
        source = s.source();
    }
    FetchError::Network {
        url: url.to_string(),
        message,
    }
}

fn without_userinfo(url: &Url) -> Result<Url, FetchError> {
    if !matches!(url.scheme(), "http" | "https") {
        return Err(FetchError::UnsupportedScheme(url.scheme().to_string()));
    }
    let mut clean = url.clone();
    let _ = clean.set_username("");
    let _ = clean.set_password(None);
    Ok(clean)
}

fn redirect_target(current: &Url, response: &reqwest::Response) -> Result<Option<Url>, FetchError> {
    if !matches!(response.status().as_u16(), 301 | 302 | 303 | 307 | 308) {
        return Ok(None);
    }
    let Some(location) = response.headers().get(LOCATION).and_then(|v| v.to_str().ok()) else {
        return Ok(None);
    };
    let next = current.join(location).map_err(|e| FetchError::Network {
        url: current.to_string(),
        message: format!("bad redirect location {location:?}: {e}"),
    })?;
    without_userinfo(&next).map(Some)
}

//! Static demo page showing the tool as a web app and as notebook cell output.

use alloc::format;
use alloc::string::String;

use sha2::{Digest, Sha256};

use crate::codegen::template::html_text;
use crate::codegen::{install_command, usage_snippet, CodegenError, PackageTree};
use crate::config::BundleConfig;
use crate::json::JsonValue;
use crate::protocol::{encode_payload, escape_srcdoc, inject_bootstrap, render_iframe, IframeOptions, PayloadEnvelope, WidgetId};
use crate::BOOTSTRAP_MARKER;

pub const DEMO_PATH: &str = "demo/index.html";
pub const NO_PAYLOAD_NOTE: &str = "No sample payload configured; the widget receives null.";

const STYLE: &str = "body { margin: 0; font-family: system-ui, sans-serif; background: #f6f6f4; color: #222; }
header { padding: 16px 24px; border-bottom: 1px solid #ddd; background: #fff; }
header h1 { margin: 0; font-size: 20px; }
main { display: flex; flex-wrap: wrap; gap: 24px; padding: 24px; }
section { flex: 1 1 0; min-width: 320px; }
section h2 { font-size: 16px; margin: 0 0 12px; }
.frame { background: #fff; border: 1px solid #ddd; overflow: auto; }
.cell { background: #fff; border: 1px solid #ccc; border-radius: 4px; }
.cell pre { margin: 0; padding: 12px; font-family: ui-monospace, monospace; font-size: 13px; background: #f0f0f0; border-bottom: 1px solid #ccc; white-space: pre-wrap; }
.cell .output { padding: 12px; overflow: auto; }
.note { padding: 8px 12px; background: #fff6d6; border: 1px solid #e8d48a; margin: 0 0 12px; }
";

/// Widget id derived from the page inputs so repeated runs are identical.
fn demo_widget_id(bundled_html: &str, payload_json: &str) -> WidgetId {
    let mut hasher = Sha256::new();
    hasher.update(bundled_html.as_bytes());
    hasher.update([0]);
    hasher.update(payload_json.as_bytes());
    let digest = hasher.finalize();
    WidgetId::from_bits(u32::from_be_bytes([digest[0], digest[1], digest[2], digest[3]]))
}

/// Builds `demo/index.html`. Both panels embed the same document, so their
/// `srcdoc` values are identical.
pub fn generate_demo(
    config: &BundleConfig,
    bundled_html: &str,
    sample_payload: Option<&JsonValue>,
) -> Result<PackageTree, CodegenError> {
    if !bundled_html.contains(BOOTSTRAP_MARKER) {
        return Err(CodegenError::MissingMarker);
    }
    let spec = &config.package;
    let data = sample_payload.cloned().unwrap_or(JsonValue::Null);
    let payload_json = data.to_script_json().map_err(|e| CodegenError::Payload(e.path))?;
    let widget_id = demo_widget_id(bundled_html, &payload_json);
    let envelope = PayloadEnvelope::new(data, config.event_name.clone(), widget_id)
        .map_err(|e| CodegenError::Invalid(format!("{e}")))?;
    let options = IframeOptions::new(spec.default_width, spec.default_height)
        .ok_or_else(|| CodegenError::Invalid("widget dimensions must be positive".into()))?;

    let bootstrap = encode_payload(&envelope).map_err(|e| CodegenError::Invalid(format!("{e}")))?;
    let srcdoc = escape_srcdoc(&inject_bootstrap(bundled_html, &bootstrap));
    let cell_output = render_iframe(bundled_html, &envelope, &options).map_err(|e| CodegenError::Invalid(format!("{e}")))?;

    let title = html_text(&config.name);
    let mut page = String::with_capacity(2 * srcdoc.len() + 4096);
    page.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n");
    page.push_str("<meta name=\"viewport\" content=\"width=device-width, initial-scale=1\">\n");
    page.push_str(&format!("<title>{title} demo</title>\n<style>\n{STYLE}</style>\n</head>\n<body>\n"));
    page.push_str(&format!("<header><h1>{title}</h1></header>\n<main>\n"));

    page.push_str("<section id=\"web-app\">\n<h2>Web app</h2>\n");
    if sample_payload.is_none() {
        page.push_str(&format!("<p class=\"note\">{NO_PAYLOAD_NOTE}</p>\n"));
    }
    page.push_str(&format!(
        "<div class=\"frame\"><iframe id=\"nova-app-{widget_id}\" title=\"{title}\" srcdoc=\"{srcdoc}\" width=\"{w}\" height=\"{h}\" frameborder=\"0\" style=\"border:none;\"></iframe></div>\n</section>\n",
        w = options.width,
        h = options.height,
    ));

    page.push_str("<section id=\"notebook-widget\">\n<h2>Notebook widget</h2>\n");
    if let Some(url) = &config.notebook_url {
        page.push_str(&format!("<p><a href=\"{}\">Open in a notebook</a></p>\n", html_text(url)));
    }
    let code = format!("!{}\n\n{}", install_command(spec), usage_snippet(spec));
    page.push_str(&format!(
        "<div class=\"cell\">\n<pre><code>{}</code></pre>\n<div class=\"output\">{cell_output}</div>\n</div>\n</section>\n",
        html_text(&code)
    ));
    page.push_str("</main>\n</body>\n</html>\n");

    let mut tree = PackageTree::new();
    tree.insert(DEMO_PATH, page);
    Ok(tree)
}

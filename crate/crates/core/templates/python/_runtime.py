"""Display runtime for single-file notebook widgets.

Renders a bundled widget document into an ``<iframe srcdoc>`` and hands it a
JSON payload through a bootstrap script: the payload is stored in
``window.__NOVA_PAYLOAD__`` immediately and dispatched as a ``CustomEvent``
(payload in ``detail``) when the window loads. Communication is one way, from
the notebook to the widget.

Only the standard library is used. The output of ``render`` is byte-for-byte
identical to the generator's own renderer for the same inputs.
"""

import math
import re
import secrets
import string
import threading

PAYLOAD_GLOBAL = "__NOVA_PAYLOAD__"
EVENT_GLOBAL = "__NOVA_EVENT__"
MARKER = "<!--NOVA:BOOTSTRAP-->"
BOOTSTRAP_ID_PREFIX = "nova-bootstrap-"
IFRAME_ID_PREFIX = "nova-widget-"
DEFAULT_EVENT_NAME = "novaData"

_EVENT_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_-]*\Z")
_WIDGET_ID_RE = re.compile(r"[0-9a-f]{8}\Z")
_SIMPLE_KEY_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

_issued = set()
_issued_lock = threading.Lock()


def new_widget_id(explicit=None):
    """Return ``explicit`` if given, else a fresh id unique in this process."""
    if explicit is not None:
        if not isinstance(explicit, str) or not _WIDGET_ID_RE.match(explicit):
            raise ValueError(
                "widget id %r must be exactly 8 lowercase hex digits" % (explicit,)
            )
        with _issued_lock:
            _issued.add(explicit)
        return explicit
    with _issued_lock:
        while True:
            candidate = secrets.token_hex(4)
            if candidate not in _issued:
                _issued.add(candidate)
                return candidate


def _member_path(path, key):
    if _SIMPLE_KEY_RE.match(key):
        return "%s.%s" % (path, key)
    return "%s[%s]" % (path, _encode_str(key))


def _not_representable(path, why):
    return "payload value at `%s` is not representable as JSON (%s)" % (path, why)


def _check(value, path):
    if value is None or isinstance(value, (bool, str, int)):
        return
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(_not_representable(path, "non-finite number"))
        return
    if isinstance(value, (list, tuple)):
        for i, item in enumerate(value):
            _check(item, "%s[%d]" % (path, i))
        return
    if isinstance(value, dict):
        for key, item in value.items():
            if not isinstance(key, str):
                raise TypeError(_not_representable(path, "non-string key %r" % (key,)))
            _check(item, _member_path(path, key))
        return
    raise TypeError(_not_representable(path, type(value).__name__))


_ESCAPES = {
    '"': '\\"',
    "\\": "\\\\",
    "\b": "\\b",
    "\f": "\\f",
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
}
_STR_ESCAPE_RE = re.compile(r'[\x00-\x1f\\"]')


def _encode_str(s):
    def repl(match):
        ch = match.group(0)
        return _ESCAPES.get(ch) or "\\u%04x" % ord(ch)

    return '"' + _STR_ESCAPE_RE.sub(repl, s) + '"'


def _format_float(value):
    # Shortest round-trip digits (as repr), laid out like the generator does.
    if value == 0.0:
        return "-0.0" if math.copysign(1.0, value) < 0 else "0.0"
    text = repr(value)
    sign = ""
    if text.startswith("-"):
        sign, text = "-", text[1:]
    mantissa, _, exp = text.partition("e")
    exponent = int(exp) if exp else 0
    whole, _, frac = mantissa.partition(".")
    digits = whole + frac
    point = len(whole) + exponent
    stripped = digits.lstrip("0")
    point -= len(digits) - len(stripped)
    digits = stripped.rstrip("0") or "0"
    length = len(digits)
    k = point - length
    if 0 <= k and point <= 16:
        body = digits + "0" * k + ".0"
    elif 0 < point <= 16:
        body = digits[:point] + "." + digits[point:]
    elif -5 < point <= 0:
        body = "0." + "0" * (-point) + digits
    elif length == 1:
        body = "%se%d" % (digits, point - 1)
    else:
        body = "%s.%se%d" % (digits[0], digits[1:], point - 1)
    return sign + body


def _encode(value, out):
    if value is None:
        out.append("null")
    elif value is True:
        out.append("true")
    elif value is False:
        out.append("false")
    elif isinstance(value, int):
        out.append(str(int(value)))
    elif isinstance(value, float):
        out.append(_format_float(value))
    elif isinstance(value, str):
        out.append(_encode_str(value))
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(",")
            _encode(item, out)
        out.append("]")
    else:
        out.append("{")
        for i, (key, item) in enumerate(value.items()):
            if i:
                out.append(",")
            out.append(_encode_str(key))
            out.append(":")
            _encode(item, out)
        out.append("}")


def to_script_json(value):
    """Compact JSON safe to place inside a ``<script>`` element."""
    _check(value, "$")
    out = []
    _encode(value, out)
    text = "".join(out)
    return text.replace("<", "\\u003c").replace(">", "\\u003e").replace("&", "\\u0026")


def encode_payload(payload, event_name, widget_id):
    if not isinstance(event_name, str) or not _EVENT_NAME_RE.match(event_name):
        raise ValueError("event name %r must match [A-Za-z][A-Za-z0-9_-]*" % (event_name,))
    data = to_script_json(payload)
    return (
        '<script id="%s%s">window.%s = %s; window.%s = "%s"; '
        'window.addEventListener("load", function () { '
        'window.dispatchEvent(new CustomEvent("%s", { detail: window.%s })); });</script>'
        % (
            BOOTSTRAP_ID_PREFIX,
            widget_id,
            PAYLOAD_GLOBAL,
            data,
            EVENT_GLOBAL,
            event_name,
            event_name,
            PAYLOAD_GLOBAL,
        )
    )


_ASCII_LOWER = str.maketrans(string.ascii_uppercase, string.ascii_lowercase)
_RAW_TEXT = ("script", "style", "textarea", "title", "xmp", "iframe", "noembed", "noframes", "noscript")


_SPACE = " \t\n\r\f"


def _tag_end(html, i):
    """Offset after the ``>`` closing the start tag whose name ends at ``i``."""
    n = len(html)
    while True:
        while i < n and (html[i] in _SPACE or html[i] == "/"):
            i += 1
        if i >= n:
            return n
        if html[i] == ">":
            return i + 1
        i += 1
        while i < n and html[i] not in _SPACE and html[i] not in "/>=":
            i += 1
        j = i
        while j < n and html[j] in _SPACE:
            j += 1
        if j >= n or html[j] != "=":
            continue
        j += 1
        while j < n and html[j] in _SPACE:
            j += 1
        if j < n and html[j] in "\"'":
            close = html.find(html[j], j + 1)
            i = n if close < 0 else close + 1
        else:
            while j < n and html[j] not in _SPACE and html[j] != ">":
                j += 1
            i = j


def _head_insertion_point(html):
    lower = html.translate(_ASCII_LOWER)
    n = len(html)
    i = 0
    while True:
        i = html.find("<", i)
        if i < 0 or i + 1 >= n:
            return None
        if html.startswith("<!--", i):
            rest = i + 4
            if html.startswith(">", rest):
                i = rest + 1
            elif html.startswith("->", rest):
                i = rest + 2
            else:
                a = html.find("-->", rest)
                b = html.find("--!>", rest)
                if a < 0 and b < 0:
                    return None
                i = b + 4 if (b >= 0 and (a < 0 or b < a)) else a + 3
            continue
        nxt = html[i + 1]
        if nxt in "!?" or nxt == "/":
            close = html.find(">", i)
            if close < 0:
                return None
            i = close + 1
            continue
        if not nxt.isascii() or not nxt.isalpha():
            i += 1
            continue
        j = i + 1
        while j < n and html[j] not in _SPACE and html[j] not in "/>":
            j += 1
        name = lower[i + 1 : j]
        end = _tag_end(html, j)
        if name == "head":
            return end
        if name in _RAW_TEXT:
            k = end
            while True:
                k = lower.find("</" + name, k)
                if k < 0:
                    return None
                after = k + 2 + len(name)
                if after >= n or html[after] in " \t\n\r\f/>":
                    break
                k += 2
            i = k
            continue
        i = end


def inject_bootstrap(html, bootstrap):
    at = html.find(MARKER)
    if at >= 0:
        return html[:at] + bootstrap + html[at + len(MARKER) :]
    at = _head_insertion_point(html)
    if at is None:
        at = 0
    return html[:at] + bootstrap + html[at:]


def escape_srcdoc(html):
    return html.replace("&", "&amp;").replace('"', "&quot;")


def unescape_srcdoc(text):
    return text.replace("&quot;", '"').replace("&amp;", "&")


def _dimension(value, label):
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ValueError("%s must be a positive integer, got %r" % (label, value))
    return value


def render(html, payload, event_name=DEFAULT_EVENT_NAME, width=800, height=600, widget_id=None):
    """Return the ``<iframe>`` fragment showing ``html`` with ``payload``."""
    width = _dimension(width, "width")
    height = _dimension(height, "height")
    widget_id = new_widget_id(widget_id)
    bootstrap = encode_payload(payload, event_name, widget_id)
    srcdoc = escape_srcdoc(inject_bootstrap(html, bootstrap))
    return (
        '<iframe id="%s%s" srcdoc="%s" width="%d" height="%d" frameborder="0" '
        'style="border:none;"></iframe>' % (IFRAME_ID_PREFIX, widget_id, srcdoc, width, height)
    )


class Widget:
    """Notebook-displayable widget; rendered from its ``text/html`` form."""

    def __init__(self, fragment, name, widget_id, width, height):
        self._fragment = fragment
        self.name = name
        self.widget_id = widget_id
        self.width = width
        self.height = height

    def _repr_html_(self):
        return self._fragment

    def _repr_mimebundle_(self, include=None, exclude=None):
        return {"text/html": self._fragment, "text/plain": repr(self)}

    def __repr__(self):
        return "<%s widget %s (%dx%d)>" % (self.name, self.widget_id, self.width, self.height)


def show(html, payload, event_name=DEFAULT_EVENT_NAME, width=800, height=600, widget_id=None, name="widget"):
    """Build a displayable widget; notebooks render it as cell output."""
    widget_id = new_widget_id(widget_id)
    fragment = render(html, payload, event_name, width, height, widget_id)
    return Widget(fragment, name, widget_id, width, height)

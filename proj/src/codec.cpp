#include "sdsim/codec.hpp"

#include <charconv>
#include <limits>
#include <vector>

namespace sdsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ---- encoding ------------------------------------------------------------

class LineWriter {
public:
    explicit LineWriter(std::string_view tag) : out_(tag) {}

    void field() { out_.push_back('|'); }
    void item() { out_.push_back(';'); }

    void str(std::string_view s) { out_ += escape_field(s); }
    void num(std::uint64_t v) { out_ += std::to_string(v); }
    void time(SimTime t) { out_ += format_seconds(t); }

    void service(const ServiceEntry& s) {
        num(s.provider);
        item();
        str(s.service_name);
        item();
        str(s.service_type);
        item();
        str(s.description);
        item();
        time(s.expiration_time);
    }

    std::string finish() && {
        out_.push_back('\n');
        return std::move(out_);
    }

private:
    std::string out_;
};

// ---- decoding ------------------------------------------------------------

[[noreturn]] void malformed(const std::string& why) { throw MalformedMessage(why); }

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

// Canonical unsigned decimal: "0" or no leading zero, no sign.
template <class T>
T parse_uint(std::string_view s, const char* what) {
    if (s.empty() || (s.size() > 1 && s[0] == '0')) malformed(std::string("bad number for ") + what);
    T value{};
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end) malformed(std::string("bad number for ") + what);
    return value;
}

SimTime parse_time(std::string_view s) {
    if (s == "inf") return kForever;
    const auto dot = s.find('.');
    if (dot == std::string_view::npos || s.size() - dot - 1 != 3) malformed("bad timestamp");
    const auto whole = parse_uint<std::int64_t>(s.substr(0, dot), "timestamp");
    const auto frac_text = s.substr(dot + 1);
    for (char c : frac_text)
        if (c < '0' || c > '9') malformed("bad timestamp");
    const auto frac = (frac_text[0] - '0') * 100 + (frac_text[1] - '0') * 10 + (frac_text[2] - '0');
    constexpr auto limit = std::numeric_limits<SimTime::rep>::max();
    if (whole > (limit - frac) / 1000) malformed("timestamp out of range");
    const SimTime t{whole * 1000 + frac};
    if (t == kForever) malformed("timestamp out of range");
    return t;
}

std::string parse_str(std::string_view s) {
    if (s.size() > kMaxFieldBytes) malformed("string field too long");
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == ';' || c == '|' || c == '\n') malformed("unescaped reserved byte");
        if (c != '%') {
            out.push_back(c);
            continue;
        }
        const auto code = s.substr(i + 1, 2);
        if (code == "7C") out.push_back('|');
        else if (code == "3B") out.push_back(';');
        else if (code == "25") out.push_back('%');
        else if (code == "0A") out.push_back('\n');
        else malformed("bad percent escape");
        i += 2;
    }
    return out;
}

ServiceEntry parse_service(const std::vector<std::string_view>& g) {
    ServiceEntry s;
    s.provider = parse_uint<NodeId>(g[0], "provider");
    s.service_name = parse_str(g[1]);
    s.service_type = parse_str(g[2]);
    s.description = parse_str(g[3]);
    s.expiration_time = parse_time(g[4]);
    return s;
}

std::vector<std::string_view> group(std::string_view field, std::size_t arity) {
    auto g = split(field, ';');
    if (g.size() != arity) malformed("wrong item count in group");
    return g;
}

std::size_t list_length(const std::vector<std::string_view>& f, std::size_t count_index) {
    const auto n = parse_uint<std::size_t>(f[count_index], "list length");
    if (n != f.size() - count_index - 1) malformed("list length mismatch");
    return n;
}

Message decode_fields(const std::vector<std::string_view>& f) {
    const auto tag = f[0];
    if (tag == "UST") {
        if (f.size() < 4) malformed("UST field count");
        Ust m;
        m.sender = parse_uint<NodeId>(f[1], "sender");
        m.sender_seq = parse_uint<std::uint64_t>(f[2], "sender_seq");
        const auto n = list_length(f, 3);
        for (std::size_t i = 0; i < n; ++i) {
            const auto g = group(f[4 + i], 7);
            AdvertEntry a;
            a.service = parse_service(g);
            a.hops_to_provider = parse_uint<std::uint32_t>(g[5], "hops");
            a.provider_seq = parse_uint<std::uint64_t>(g[6], "provider_seq");
            m.adverts.push_back(std::move(a));
        }
        return m;
    }
    if (tag == "SREQ") {
        if (f.size() != 7) malformed("SREQ field count");
        Sreq m;
        m.request_id.origin = parse_uint<NodeId>(f[1], "origin");
        m.request_id.counter = parse_uint<std::uint64_t>(f[2], "counter");
        m.origin = parse_uint<NodeId>(f[3], "origin");
        m.query.service_type = parse_str(f[4]);
        if (!f[5].empty()) m.query.service_name = parse_str(f[5]);
        m.hop_count = parse_uint<std::uint32_t>(f[6], "hop_count");
        return m;
    }
    if (tag == "SREP") {
        if (f.size() < 7) malformed("SREP field count");
        Srep m;
        m.request_id.origin = parse_uint<NodeId>(f[1], "origin");
        m.request_id.counter = parse_uint<std::uint64_t>(f[2], "counter");
        m.origin = parse_uint<NodeId>(f[3], "origin");
        m.provider = parse_uint<NodeId>(f[4], "provider");
        m.hops_to_provider = parse_uint<std::uint32_t>(f[5], "hops_to_provider");
        const auto n = list_length(f, 6);
        for (std::size_t i = 0; i < n; ++i) m.services.push_back(parse_service(group(f[7 + i], 5)));
        return m;
    }
    if (tag == "RERR") {
        if (f.size() < 4) malformed("RERR field count");
        Rerr m;
        m.error_id.origin = parse_uint<NodeId>(f[1], "origin");
        m.error_id.counter = parse_uint<std::uint64_t>(f[2], "counter");
        const auto n = list_length(f, 3);
        for (std::size_t i = 0; i < n; ++i) {
            const auto g = group(f[4 + i], 2);
            m.unreachable.push_back({parse_uint<NodeId>(g[0], "destination"),
                                     parse_uint<std::uint64_t>(g[1], "sequence_number")});
        }
        return m;
    }
    if (tag == "DATA") {
        if (f.size() != 4) malformed("DATA field count");
        Data m;
        m.source = parse_uint<NodeId>(f[1], "source");
        m.destination = parse_uint<NodeId>(f[2], "destination");
        m.payload_tag = parse_str(f[3]);
        return m;
    }
    malformed("unknown tag");
}

}  // namespace

std::string escape_field(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '|': out += "%7C"; break;
            case ';': out += "%3B"; break;
            case '%': out += "%25"; break;
            case '\n': out += "%0A"; break;
            default: out.push_back(c);
        }
    }
    if (out.size() > kMaxFieldBytes)
        throw FieldTooLong("string field is " + std::to_string(out.size()) + " bytes after escaping");
    return out;
}

std::string encode_message(const Message& msg) {
    if (auto why = message_violation(msg); !why.empty()) throw InvalidMessage(why);

    LineWriter w(message_tag(msg));
    std::visit(overloaded{
                   [&](const Ust& m) {
                       w.field(); w.num(m.sender);
                       w.field(); w.num(m.sender_seq);
                       w.field(); w.num(m.adverts.size());
                       for (const auto& a : m.adverts) {
                           w.field();
                           w.service(a.service);
                           w.item(); w.num(a.hops_to_provider);
                           w.item(); w.num(a.provider_seq);
                       }
                   },
                   [&](const Sreq& m) {
                       w.field(); w.num(m.request_id.origin);
                       w.field(); w.num(m.request_id.counter);
                       w.field(); w.num(m.origin);
                       w.field(); w.str(m.query.service_type);
                       w.field(); if (m.query.service_name) w.str(*m.query.service_name);
                       w.field(); w.num(m.hop_count);
                   },
                   [&](const Srep& m) {
                       w.field(); w.num(m.request_id.origin);
                       w.field(); w.num(m.request_id.counter);
                       w.field(); w.num(m.origin);
                       w.field(); w.num(m.provider);
                       w.field(); w.num(m.hops_to_provider);
                       w.field(); w.num(m.services.size());
                       for (const auto& s : m.services) {
                           w.field();
                           w.service(s);
                       }
                   },
                   [&](const Rerr& m) {
                       w.field(); w.num(m.error_id.origin);
                       w.field(); w.num(m.error_id.counter);
                       w.field(); w.num(m.unreachable.size());
                       for (const auto& u : m.unreachable) {
                           w.field(); w.num(u.destination);
                           w.item(); w.num(u.sequence_number);
                       }
                   },
                   [&](const Data& m) {
                       w.field(); w.num(m.source);
                       w.field(); w.num(m.destination);
                       w.field(); w.str(m.payload_tag);
                   },
               },
               msg);
    return std::move(w).finish();
}

Message decode_message(std::string_view bytes) {
    if (bytes.empty() || bytes.back() != '\n') malformed("missing line terminator");
    const auto line = bytes.substr(0, bytes.size() - 1);
    if (line.find('\n') != std::string_view::npos) malformed("embedded line break");

    Message msg = decode_fields(split(line, '|'));
    if (auto why = message_violation(msg); !why.empty()) malformed(why);
    return msg;
}

}  // namespace sdsim

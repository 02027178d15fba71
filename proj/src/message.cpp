#include "sdsim/message.hpp"

namespace sdsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string service_violation(const ServiceEntry& s) {
    if (s.service_name.empty()) return "empty service name";
    if (s.service_type.empty()) return "empty service type";
    if (s.expiration_time.count() < 0) return "negative expiration time";
    return {};
}

}  // namespace

std::string_view message_tag(const Message& msg) {
    return std::visit(overloaded{
                          [](const Ust&) { return std::string_view{"UST"}; },
                          [](const Sreq&) { return std::string_view{"SREQ"}; },
                          [](const Srep&) { return std::string_view{"SREP"}; },
                          [](const Rerr&) { return std::string_view{"RERR"}; },
                          [](const Data&) { return std::string_view{"DATA"}; },
                      },
                      msg);
}

std::string message_violation(const Message& msg) {
    return std::visit(
        overloaded{
            [](const Ust& m) -> std::string {
                if (m.adverts.empty()) return "UST without adverts";
                for (const auto& a : m.adverts) {
                    if (auto why = service_violation(a.service); !why.empty()) return why;
                    if (a.service.provider == m.sender && a.hops_to_provider != 0)
                        return "sender's own advert with non-zero hops";
                }
                return {};
            },
            [](const Sreq& m) -> std::string {
                if (m.request_id.origin != m.origin) return "request id origin mismatch";
                if (m.query.service_type.empty()) return "empty query type";
                if (m.query.service_name && m.query.service_name->empty())
                    return "empty query name";
                return {};
            },
            [](const Srep& m) -> std::string {
                if (m.request_id.origin != m.origin) return "request id origin mismatch";
                if (m.services.empty()) return "SREP without services";
                for (const auto& s : m.services) {
                    if (auto why = service_violation(s); !why.empty()) return why;
                    if (s.provider != m.provider) return "service of a different provider";
                }
                return {};
            },
            [](const Rerr& m) -> std::string {
                if (m.unreachable.empty()) return "RERR without destinations";
                return {};
            },
            [](const Data&) -> std::string { return {}; },
        },
        msg);
}

}  // namespace sdsim

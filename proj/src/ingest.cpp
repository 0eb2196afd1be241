#include "ingest.hpp"

#include <set>

#include "json.hpp"
#include "parser.hpp"

namespace ag {

using nlohmann::json;

namespace {

const char* const default_kb = R"kb({
  "login_services": ["ssh", "rdp", "telnet", "vnc"],
  "port_protocols": {
    "22": "ssh", "23": "telnet", "25": "smtp", "53": "dns",
    "80": "http", "443": "https", "502": "modbus"
  },
  "link_protocol_vulns": {
    "arp":    [{"id": "arpSpoofing", "range": "adjacent", "consequence": "impersonateDst"}],
    "wep":    [{"id": "weakEncryption", "range": "remoteExploit", "consequence": "keyExtraction"}],
    "wpa2":   [{"id": "krackAttack", "range": "adjacent", "consequence": "keyReinstallation"}],
    "modbus": [{"id": "noAuthentication", "range": "adjacent", "consequence": "impersonateSrc"}]
  },
  "e2e_protocol_vulns": {
    "dns":  [{"id": "dnsCachePoisoning", "range": "remoteExploit", "consequence": "dataFalsification"}],
    "smtp": [{"id": "unencrypted", "range": "remoteExploit", "consequence": "eavesdropping"}]
  }
})kb";

term constant_or_wildcard(const json& obj, const char* field) {
    if (!obj.contains(field) || obj[field].is_null()) return term::wildcard();
    if (obj[field].is_number_integer())
        return term::constant(std::to_string(obj[field].get<long long>()));
    return term::constant(obj[field].get<std::string>());
}

std::string require_string(const json& obj, const char* field, const std::string& where) {
    if (!obj.contains(field) || !obj[field].is_string() || obj[field].get<std::string>().empty())
        throw ingest_error(where + ": missing required field '" + field + "'");
    return obj[field].get<std::string>();
}

// Protocols and ports default to the reserved constant `unknown`, which
// behaves as an ordinary constant: unknown services only join ACL rows
// generated with the same constant.
std::string string_or_unknown(const json& obj, const char* field) {
    if (!obj.contains(field) || obj[field].is_null()) return "unknown";
    if (obj[field].is_number_integer()) return std::to_string(obj[field].get<long long>());
    std::string value = obj[field].get<std::string>();
    return value.empty() ? "unknown" : value;
}

class inventory_builder {
public:
    explicit inventory_builder(const json& doc) : doc_(doc) {
        kb_ = json::parse(default_kb);
        if (doc_.contains("knowledge_base")) merge_kb(doc_["knowledge_base"]);
    }

    ingest_result build() {
        if (!doc_.contains("schema_version") || doc_["schema_version"] != 1)
            throw ingest_error("inventory document must declare schema_version 1");
        zones();
        hosts();
        credentials();
        network_acls();
        access_points();
        resolvers();
        bus_roles();
        relays();
        manual();
        return std::move(result_);
    }

private:
    void merge_kb(const json& extra) {
        if (extra.contains("login_services"))
            for (const auto& s : extra["login_services"]) kb_["login_services"].push_back(s);
        for (const char* section : {"port_protocols", "link_protocol_vulns", "e2e_protocol_vulns"})
            if (extra.contains(section))
                for (auto it = extra[section].begin(); it != extra[section].end(); ++it)
                    kb_[section][it.key()] = it.value();
    }

    bool is_login_service(const std::string& program) const {
        for (const auto& s : kb_["login_services"])
            if (s.get<std::string>() == program) return true;
        return false;
    }

    void emit(atom fact) {
        std::string text = fact.to_string();
        if (!seen_.insert(text).second) return;
        result_.facts.clauses.push_back({std::move(fact), {}, ""});
    }

    void emit(const std::string& predicate, std::vector<term> args) {
        emit(atom{predicate, std::move(args)});
    }

    static term c(const std::string& text) { return term::constant(text); }

    void warn(std::string message) { result_.warnings.push_back(std::move(message)); }

    void zones() {
        for (const auto& zone : doc_.value("zones", json::array())) {
            std::string id = require_string(zone, "id", "zone");
            std::string type = require_string(zone, "type", "zone " + id);
            if (type != "ipSubnet" && type != "bus" && type != "physical")
                throw ingest_error("zone " + id + ": unknown zone type '" + type + "'");
            zone_types_[id] = type;
            for (const auto& prot : zone.value("protocols", json::array())) {
                std::string protocol = prot.get<std::string>();
                emit("existingProtocol", {c(id), c(protocol)});
                link_vulns(id, protocol);
            }
        }
    }

    void link_vulns(const std::string& zone, const std::string& protocol) {
        const auto& catalog = kb_["link_protocol_vulns"];
        if (!catalog.contains(protocol)) {
            warn("zone " + zone + ": no known link vulnerabilities for protocol '" + protocol +
                 "'; none generated");
            return;
        }
        for (const auto& vul : catalog[protocol])
            emit("vulLinkProtocol", {c(zone), c(vul.at("id").get<std::string>()), c(protocol),
                                     c(vul.at("range").get<std::string>()),
                                     c(vul.at("consequence").get<std::string>())});
    }

    void hosts() {
        for (const auto& host : doc_.value("hosts", json::array())) {
            std::string name = require_string(host, "name", "host");
            for (const auto& zone : host.value("zones", json::array())) {
                std::string id = require_string(zone, "id", "host " + name + " zone");
                std::string type = zone.contains("type") ? zone["type"].get<std::string>()
                                                         : zone_types_.count(id)
                                                               ? zone_types_[id]
                                                               : "";
                if (type != "ipSubnet" && type != "bus" && type != "physical")
                    throw ingest_error("host " + name + ": unknown zone type '" + type +
                                       "' for zone " + id);
                emit("located", {c(name), c(id), c(type)});
            }
            if (host.value("discoverable", false)) emit("inDiscoveryMode", {c(name)});
            services(name, host);
            for (const auto& svc : host.value("local_services", json::array()))
                emit("localService", {c(name), c(require_string(svc, "program", "local service")),
                                      constant_or_wildcard(svc, "user")});
            accounts(name, host);
            for (const auto& rule : host.value("firewall", json::array())) {
                emit("aclH", {c(name), constant_or_wildcard(rule, "user"),
                              constant_or_wildcard(rule, "src"),
                              rule.contains("dst") ? constant_or_wildcard(rule, "dst") : c(name),
                              constant_or_wildcard(rule, "protocol"),
                              constant_or_wildcard(rule, "port")});
            }
            for (const auto& vul : host.value("vulnerabilities", json::array())) {
                std::string where = "host " + name + " vulnerability";
                emit("vulHost", {c(name), c(require_string(vul, "id", where)),
                                 c(require_string(vul, "program", where)),
                                 c(require_string(vul, "range", where)),
                                 c(require_string(vul, "consequence", where))});
            }
        }
    }

    void services(const std::string& host, const json& spec) {
        for (const auto& svc : spec.value("services", json::array())) {
            std::string program = require_string(svc, "program", "service on " + host);
            std::string protocol = string_or_unknown(svc, "protocol");
            std::string port = string_or_unknown(svc, "port");
            emit("networkService",
                 {c(host), c(program), c(protocol), c(port), constant_or_wildcard(svc, "user")});
            if (is_login_service(program)) {
                emit("isLoginService", {c(program)});
                login_hosts_.insert(host);
            }
            if (protocol == "unknown" || port == "unknown") {
                // Mirror rows so unknown services stay reachable in the model.
                emit("aclNW", {term::wildcard(), c(host), c(protocol), c(port)});
                emit("aclH", {c(host), term::wildcard(), term::wildcard(), c(host), c(protocol),
                              c(port)});
            }
        }
    }

    void accounts(const std::string& host, const json& spec) {
        for (const auto& account : spec.value("accounts", json::array())) {
            std::string principal = account.contains("principal")
                                        ? account["principal"].get<std::string>()
                                        : host + "User";
            std::string user =
                account.contains("user") ? account["user"].get<std::string>() : "admin";
            emit("hasAccount", {c(principal), c(host), c(user)});
            emit("localAccess", {c(principal), c(host), c(user)});
            host_accounts_[host].insert(user);
        }
    }

    // One credential datum per (login service host, account) pair.
    void credentials() {
        for (const auto& host : login_hosts_) {
            auto it = host_accounts_.find(host);
            if (it == host_accounts_.end()) continue;
            for (const auto& user : it->second)
                emit("isCredential", {c(user + "_" + host + "Credentials"), c(host), c(user)});
        }
    }

    void network_acls() {
        for (const auto& rule : doc_.value("network_acls", json::array())) {
            emit("aclNW", {c(require_string(rule, "src", "network acl")),
                           c(require_string(rule, "dst", "network acl")),
                           constant_or_wildcard(rule, "protocol"),
                           constant_or_wildcard(rule, "port")});
        }
    }

    void access_points() {
        for (const auto& ap : doc_.value("access_points", json::array())) {
            std::string name = require_string(ap, "name", "access point");
            std::string security = require_string(ap, "security", "access point " + name);
            if (security != "open" && security != "secured")
                throw ingest_error("access point " + name + ": security must be open or secured");
            emit("isAP", {c(name), c(require_string(ap, "range", "access point " + name)),
                          c(require_string(ap, "zone", "access point " + name)),
                          c(require_string(ap, "protocol", "access point " + name)), c(security)});
            for (const auto& client : ap.value("clients", json::array()))
                emit("isAuthenticated",
                     {c(require_string(client, "principal", "access point client")),
                      c(require_string(client, "device", "access point client")), c(name)});
        }
    }

    void resolvers() {
        for (const auto& r : doc_.value("resolvers", json::array()))
            emit("isNameResolver", {c(require_string(r, "host", "resolver")),
                                    c(require_string(r, "client", "resolver")),
                                    c(require_string(r, "resolves", "resolver"))});
    }

    void bus_roles() {
        for (const auto& bus : doc_.value("bus_roles", json::array())) {
            std::string id = require_string(bus, "bus", "bus role");
            if (bus.contains("master")) emit("isMaster", {c(bus["master"].get<std::string>()), c(id)});
            for (const auto& slave : bus.value("slaves", json::array()))
                emit("isSlave", {c(slave.get<std::string>()), c(id)});
        }
    }

    void relays() {
        for (const auto& relay : doc_.value("relays", json::array())) {
            std::string host = require_string(relay, "host", "relay");
            if (relay.contains("flow")) {
                emit("relay", {c(host), c(relay["flow"].get<std::string>())});
            } else if (relay.contains("protocol") || relay.contains("port")) {
                emit("relay", {c(host), c(require_string(relay, "src", "relay")),
                               c(require_string(relay, "dst", "relay")),
                               constant_or_wildcard(relay, "protocol"),
                               constant_or_wildcard(relay, "port")});
            } else {
                emit("relay", {c(host), c(require_string(relay, "src", "relay")),
                               c(require_string(relay, "dst", "relay"))});
            }
        }
    }

    void data_flow(const json& flow) {
        std::string name = require_string(flow, "name", "data flow");
        if (flow.contains("src") && flow.contains("dst")) {
            std::string direction = flow.value("direction", "twoWay");
            if (direction != "oneWay" && direction != "twoWay")
                throw ingest_error("data flow " + name + ": direction must be oneWay or twoWay");
            emit("dataFlow", {c(flow["src"].get<std::string>()),
                              c(flow["dst"].get<std::string>()), c(name), c(direction)});
        } else if (flow.contains("host")) {
            emit("dataFlow", {c(flow["host"].get<std::string>()), c(name)});
        } else {
            throw ingest_error("data flow " + name + ": needs src/dst or host");
        }
        if (flow.value("pairing", false)) emit("isPairingProcess", {c(name)});

        std::string port = string_or_unknown(flow, "port");
        std::string protocol = string_or_unknown(flow, "protocol");
        if (protocol == "unknown" && port != "unknown") {
            const auto& hints = kb_["port_protocols"];
            if (hints.contains(port)) protocol = hints[port].get<std::string>();
        }
        if (protocol == "unknown" && port == "unknown") {
            warn("data flow " + name + ": no protocol or port; flow left unbound");
            return;
        }
        emit("flowBind", {c(name), c(protocol),
                          port == "unknown" && !flow.contains("port") ? term::wildcard()
                                                                      : c(port)});
        e2e_vulns(flow, protocol, port);
    }

    void e2e_vulns(const json& flow, const std::string& protocol, const std::string& port) {
        if (!flow.contains("src") || !flow.contains("dst")) return;
        const auto& catalog = kb_["e2e_protocol_vulns"];
        if (!catalog.contains(protocol)) return;
        for (const auto& vul : catalog[protocol])
            emit("vulE2EProtocol",
                 {c(flow["src"].get<std::string>()), c(flow["dst"].get<std::string>()),
                  c(vul.at("id").get<std::string>()), c(protocol),
                  port == "unknown" ? term::wildcard() : c(port),
                  c(vul.at("range").get<std::string>()),
                  c(vul.at("consequence").get<std::string>())});
    }

    void flagged(const json& entry) {
        std::string name = require_string(entry, "name", "flagged data");
        for (const auto& vul : entry.value("vulnerabilities", json::array()))
            emit("vulData", {c(name), c(require_string(vul, "id", "flagged data " + name)),
                             c(require_string(vul, "consequence", "flagged data " + name))});
        if (entry.contains("host")) {
            std::string host = entry["host"].get<std::string>();
            // The concrete path is unknowable from the outside, so the datum
            // is bound to a generic stand-in path.
            emit("dataBind", {c(name), c(host), c("generic_" + name + "_path")});
            std::string kind = entry.value("kind", "");
            if (kind == "credential")
                emit("isCredential", {c(name), c(host), constant_or_wildcard(entry, "user")});
            else if (kind == "nameResolverRecord")
                emit("isNameResolverRecord", {c(name)});
        }
    }

    void manual() {
        if (!doc_.contains("manual")) return;
        const json& manual = doc_["manual"];
        for (const auto& host : manual.value("attacker_located", json::array()))
            emit("attackerLocated", {c(host.get<std::string>())});
        for (const auto& principal : manual.value("malicious", json::array()))
            emit("malicious", {c(principal.get<std::string>())});
        for (const auto& flow : manual.value("data_flows", json::array())) data_flow(flow);
        for (const auto& entry : manual.value("flagged_data", json::array())) flagged(entry);
        for (const auto& goal : manual.value("goals", json::array())) {
            try {
                result_.facts.goals.push_back(parse_atom(goal.get<std::string>()));
            } catch (const parse_error& e) {
                throw ingest_error("goal '" + goal.get<std::string>() + "': " + e.what());
            }
        }
    }

    const json& doc_;
    json kb_;
    ingest_result result_;
    std::set<std::string> seen_;
    std::map<std::string, std::string> zone_types_;
    std::set<std::string> login_hosts_;
    std::map<std::string, std::set<std::string>> host_accounts_;
};

} // namespace

ingest_result ingest_inventory(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ingest_error(std::string("invalid inventory JSON: ") + e.what());
    }
    try {
        return inventory_builder(doc).build();
    } catch (const json::exception& e) {
        throw ingest_error(std::string("malformed inventory document: ") + e.what());
    }
}

std::string default_knowledge_base() { return default_kb; }

} // namespace ag

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "datalog.hpp"

namespace ag {

class ingest_error : public std::runtime_error {
public:
    explicit ingest_error(std::string message) : std::runtime_error(std::move(message)) {}
};

struct ingest_result {
    program facts;
    std::vector<std::string> warnings;
};

/// Maps a structured host-inventory document (JSON, schema_version 1; see
/// docs/inventory-schema.json) to a fact program. Fields copied from the
/// document are emitted verbatim; absent service protocol/port become the
/// `unknown` constant and absent users become wildcards, with matching
/// aclNW/aclH rows mirrored for unknown services; account defaults are
/// "<host>User" / admin; credential facts are synthesized per (login
/// service, account) pair; protocol vulnerabilities come from the knowledge
/// base joined against each zone's protocols. The manual section passes
/// through attacker location, goals, malicious principals, data flows, and
/// flagged data. Pure function of its input: equal documents produce equal
/// programs.
ingest_result ingest_inventory(std::string_view json_text);

/// The built-in knowledge base (login services, port hints, protocol
/// vulnerability catalog) as a JSON document; a document's knowledge_base
/// section extends or overrides it per key.
std::string default_knowledge_base();

} // namespace ag

#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bpcm/clock.hpp"
#include "bpcm/model.hpp"

namespace bpcm {

// Who made a change, why, and a free-text description of it.
struct Provenance {
    std::string agent_name;
    std::string cause;
    std::string description;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

// --- User task modifications ------------------------------------------------

struct AssigneeChange {
    std::optional<std::string> old_value;
    std::optional<std::string> new_value;
    friend bool operator==(const AssigneeChange&, const AssigneeChange&) = default;
};

struct DueDateChange {
    std::optional<std::string> old_value;
    std::optional<std::string> new_value;
    friend bool operator==(const DueDateChange&, const DueDateChange&) = default;
};

struct DescriptionChange {
    std::optional<std::string> old_value;
    std::optional<std::string> new_value;
    friend bool operator==(const DescriptionChange&, const DescriptionChange&) = default;
};

struct CandidateUsersChange {
    std::set<std::string> old_value;
    std::set<std::string> new_value;
    friend bool operator==(const CandidateUsersChange&, const CandidateUsersChange&) = default;
};

struct CandidateGroupsChange {
    std::set<std::string> old_value;
    std::set<std::string> new_value;
    friend bool operator==(const CandidateGroupsChange&, const CandidateGroupsChange&) = default;
};

struct FormKeyChange {
    std::optional<std::string> old_value;
    std::optional<std::string> new_value;
    friend bool operator==(const FormKeyChange&, const FormKeyChange&) = default;
};

using UserTaskModification =
    std::variant<AssigneeChange, DueDateChange, DescriptionChange, CandidateUsersChange,
                 CandidateGroupsChange, FormKeyChange>;

// --- Java service task modifications ----------------------------------------

// Covers both invocation-method changes and target/endpoint shifts (same
// call type, different target).
struct CallTypeChange {
    CallType old_call = CallType::JavaClass;
    std::string old_target;
    CallType new_call = CallType::JavaClass;
    std::string new_target;
    friend bool operator==(const CallTypeChange&, const CallTypeChange&) = default;
};

struct FieldInjectionAdded {
    FieldInjection injection;
    friend bool operator==(const FieldInjectionAdded&, const FieldInjectionAdded&) = default;
};

struct FieldInjectionRemoved {
    FieldInjection injection;
    friend bool operator==(const FieldInjectionRemoved&, const FieldInjectionRemoved&) = default;
};

struct FieldInjectionModified {
    std::string field_name;
    ValueKind old_kind = ValueKind::StringValue;
    std::string old_value;
    ValueKind new_kind = ValueKind::StringValue;
    std::string new_value;
    friend bool operator==(const FieldInjectionModified&,
                           const FieldInjectionModified&) = default;
};

struct ResultVariableChange {
    std::optional<std::string> old_value;
    std::optional<std::string> new_value;
    friend bool operator==(const ResultVariableChange&, const ResultVariableChange&) = default;
};

using JavaServiceTaskModification =
    std::variant<CallTypeChange, FieldInjectionAdded, FieldInjectionRemoved,
                 FieldInjectionModified, ResultVariableChange>;

// --- Task-level operations ----------------------------------------------------

// Add/Delete carry the complete node snapshot so the record can be inverted
// and the element reconstructed byte-for-byte after canonical serialization.
struct AddNode {
    FlowNode snapshot;
    friend bool operator==(const AddNode&, const AddNode&) = default;
};

struct DeleteNode {
    FlowNode snapshot;
    friend bool operator==(const DeleteNode&, const DeleteNode&) = default;
};

struct RenameNode {
    std::optional<std::string> old_name;
    std::optional<std::string> new_name;
    friend bool operator==(const RenameNode&, const RenameNode&) = default;
};

struct ModifyUserTask {
    UserTaskModification modification;
    friend bool operator==(const ModifyUserTask&, const ModifyUserTask&) = default;
};

struct ModifyJavaServiceTask {
    JavaServiceTaskModification modification;
    friend bool operator==(const ModifyJavaServiceTask&,
                           const ModifyJavaServiceTask&) = default;
};

// Attribute-level change on a task kind without a structured detail payload.
// The attribute never names "id" or "name" (renames have their own op).
struct ModifyGenericAttr {
    std::string attribute;
    std::optional<std::string> old_value;
    std::optional<std::string> new_value;
    friend bool operator==(const ModifyGenericAttr&, const ModifyGenericAttr&) = default;
};

using TaskOp = std::variant<AddNode, DeleteNode, RenameNode, ModifyUserTask,
                            ModifyJavaServiceTask, ModifyGenericAttr>;

struct TaskChange {
    NodeKind task_kind = NodeKind::UserTask;  // one of the eleven task kinds
    std::string element_id;
    TaskOp op;
    friend bool operator==(const TaskChange&, const TaskChange&) = default;
};

// --- Sequence flow changes ----------------------------------------------------

enum class FlowAttribute {
    Name,
    SourceRef,
    TargetRef,
    ConditionExpression,
};

std::string_view to_string(FlowAttribute attribute);
std::optional<FlowAttribute> flow_attribute_from_string(std::string_view text);

struct FlowAdded {
    SequenceFlow snapshot;
    friend bool operator==(const FlowAdded&, const FlowAdded&) = default;
};

struct FlowRemoved {
    SequenceFlow snapshot;
    friend bool operator==(const FlowRemoved&, const FlowRemoved&) = default;
};

struct FlowModified {
    std::string flow_id;
    FlowAttribute attribute = FlowAttribute::Name;
    std::optional<std::string> old_value;
    std::optional<std::string> new_value;
    friend bool operator==(const FlowModified&, const FlowModified&) = default;
};

using FlowChange = std::variant<FlowAdded, FlowRemoved, FlowModified>;

// --- Generic changes ----------------------------------------------------------

// Payload for the categories the taxonomy names without further structure:
// events, gateways and data objects (node-level) and the process-level
// placeholder categories. Added/Removed carry the full node snapshot.
struct GenericAdded {
    FlowNode snapshot;
    friend bool operator==(const GenericAdded&, const GenericAdded&) = default;
};

struct GenericRemoved {
    FlowNode snapshot;
    friend bool operator==(const GenericRemoved&, const GenericRemoved&) = default;
};

// "name" targets the element's name field (or the process name at process
// level, where "id" is also addressable); every other attribute targets the
// generic attribute bag.
struct GenericModified {
    std::string attribute;
    std::optional<std::string> old_value;
    std::optional<std::string> new_value;
    friend bool operator==(const GenericModified&, const GenericModified&) = default;
};

struct GenericChange {
    std::string element_id;
    std::variant<GenericAdded, GenericRemoved, GenericModified> op;
    friend bool operator==(const GenericChange&, const GenericChange&) = default;
};

// --- The nine construct-change categories --------------------------------------

struct DeclarationChange {
    GenericChange change;
    friend bool operator==(const DeclarationChange&, const DeclarationChange&) = default;
};

struct ProcessInitializationChange {
    GenericChange change;
    friend bool operator==(const ProcessInitializationChange&,
                           const ProcessInitializationChange&) = default;
};

struct SequenceFlowChange {
    FlowChange change;
    friend bool operator==(const SequenceFlowChange&, const SequenceFlowChange&) = default;
};

struct TaskLevelChange {
    TaskChange change;
    friend bool operator==(const TaskLevelChange&, const TaskLevelChange&) = default;
};

struct CustomExtensionChange {
    GenericChange change;
    friend bool operator==(const CustomExtensionChange&,
                           const CustomExtensionChange&) = default;
};

struct DataObjectChange {
    GenericChange change;
    friend bool operator==(const DataObjectChange&, const DataObjectChange&) = default;
};

struct GatewaysChange {
    GenericChange change;
    friend bool operator==(const GatewaysChange&, const GatewaysChange&) = default;
};

struct TransactionConcurrencyChange {
    GenericChange change;
    friend bool operator==(const TransactionConcurrencyChange&,
                           const TransactionConcurrencyChange&) = default;
};

struct EventChange {
    GenericChange change;
    friend bool operator==(const EventChange&, const EventChange&) = default;
};

// Closed family: no change outside these nine categories is representable.
using ConstructChange =
    std::variant<DeclarationChange, ProcessInitializationChange, SequenceFlowChange,
                 TaskLevelChange, CustomExtensionChange, DataObjectChange, GatewaysChange,
                 TransactionConcurrencyChange, EventChange>;

enum class ChangeCategory {
    Declaration,
    ProcessInitialization,
    SequenceFlow,
    TaskLevel,
    CustomExtension,
    DataObject,
    Gateways,
    TransactionConcurrency,
    Event,
};

inline constexpr ChangeCategory kAllChangeCategories[] = {
    ChangeCategory::Declaration,     ChangeCategory::ProcessInitialization,
    ChangeCategory::SequenceFlow,    ChangeCategory::TaskLevel,
    ChangeCategory::CustomExtension, ChangeCategory::DataObject,
    ChangeCategory::Gateways,        ChangeCategory::TransactionConcurrency,
    ChangeCategory::Event,
};

std::string_view to_string(ChangeCategory category);
std::optional<ChangeCategory> change_category_from_string(std::string_view text);

// Maps a node kind to the category a change to it belongs to: the eleven
// task kinds go to TaskLevel, gateways to Gateways, events to Event and data
// objects to DataObject. Total over NodeKind.
ChangeCategory classify(NodeKind kind);

ChangeCategory category_of(const ConstructChange& change);

// The element a change applies to (node id, flow id, or process id).
const std::string& element_id_of(const ConstructChange& change);

// --- Records and sets -----------------------------------------------------------

struct ChangeRecord {
    std::string record_id;
    Timestamp timestamp;
    Provenance provenance;
    ConstructChange change;
    friend bool operator==(const ChangeRecord&, const ChangeRecord&) = default;
};

// Ordered list of records transforming one model version into the next.
// base_version/result_version are empty on freshly diffed sets and assigned
// when the set is committed to a journal.
struct ChangeSet {
    std::string set_id;
    std::string base_version;
    std::string result_version;
    std::vector<ChangeRecord> records;
    friend bool operator==(const ChangeSet&, const ChangeSet&) = default;
};

// --- Validation -------------------------------------------------------------------

enum class ViolationKind {
    EmptyRecordId,
    EmptyAgentName,
    EmptyCause,
    EmptyElementId,
    EmptyFieldName,
    NoOpModification,
    KindPayloadMismatch,
    InvalidSnapshot,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind = ViolationKind::EmptyRecordId;
    std::string detail;
    friend bool operator==(const Violation&, const Violation&) = default;
};

// Every invariant violation in the record, as structured diagnostics. An
// empty result means the record is valid. Never throws: violations are data.
std::vector<Violation> validate_record(const ChangeRecord& record);

}  // namespace bpcm

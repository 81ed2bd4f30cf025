//! IRIs of the engine vocabulary and the external vocabularies it reuses.

pub const KGBB_NS: &str = "https://w3id.org/kgbb/";
pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";

macro_rules! kgbb_terms {
    ($($name:ident = $local:literal;)*) => {
        $(pub const $name: &str = concat!("https://w3id.org/kgbb/", $local);)*
    };
}

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDF_JSON: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#JSON";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
pub const RDFS_DOMAIN: &str = "http://www.w3.org/2000/01/rdf-schema#domain";
pub const RDFS_RANGE: &str = "http://www.w3.org/2000/01/rdf-schema#range";
pub const RDFS_SUBPROPERTY_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf";
pub const OWL_OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#ObjectProperty";
pub const OWL_DATATYPE_PROPERTY: &str = "http://www.w3.org/2002/07/owl#DatatypeProperty";
pub const OWL_TRANSITIVE: &str = "http://www.w3.org/2002/07/owl#TransitiveProperty";
pub const OWL_SYMMETRIC: &str = "http://www.w3.org/2002/07/owl#SymmetricProperty";
pub const OWL_ASYMMETRIC: &str = "http://www.w3.org/2002/07/owl#AsymmetricProperty";
pub const OWL_FUNCTIONAL: &str = "http://www.w3.org/2002/07/owl#FunctionalProperty";

/// The is-about relation (IAO:0000136); statement units over it delimit context units.
pub const IS_ABOUT: &str = "IAO:0000136";

kgbb_terms! {
    // semantic-units graph
    UNIT_KIND = "unitKind";
    HAS_SEMANTIC_UNIT_SUBJECT = "hasSemanticUnitSubject";
    KGBB_URI = "KGBB_URI";
    CREATOR = "creator";
    CREATION_DATE = "creationDate";
    CREATED_WITH_APPLICATION = "createdWithApplication";
    IMPORTED_FROM = "importedFrom";
    IMPORT_DATE = "importDate";
    CURATOR = "curator";
    CURATION_DATE = "curationDate";
    DELETED_BY = "deletedBy";
    DELETION_DATE = "deletionDate";
    DATA_PRODUCTION_METADATA = "dataProductionMetadata";
    VERSION_ID = "versionID";
    DATASET_UNIT_ID = "datasetUnitID";
    EDITABLE = "editable";
    HAS_CURRENT_VERSION = "hasCurrentVersion";
    // statement extension
    STATEMENT_CATEGORY = "statementCategory";
    NEGATED = "negated";
    OBJECT_DESCRIBED_BY_SEMANTIC_UNIT = "objectDescribedBySemanticUnit";
    BASED_ON_GRAPH_PATTERN = "basedOnGraphPattern";
    HAS_CONSTRAINT_NODE = "hasConstraintNode";
    LICENSE = "license";
    ACCESS_RESTRICTED_TO = "accessRestrictedTo";
    LOGICAL_FRAMEWORK = "logicalFramework";
    HAS_CONFIDENCE_LEVEL = "hasConfidenceLevel";
    VALIDITY_START_DATE = "validityStartDate";
    VALIDITY_END_DATE = "validityEndDate";
    REFERENCE = "reference";
    // compound extension
    COMPOUND_KIND = "compoundKind";
    HAS_ASSOCIATED_SEMANTIC_UNIT = "hasAssociatedSemanticUnit";
    HAS_LINKED_SEMANTIC_UNIT = "hasLinkedSemanticUnit";
    MEMBER_ORDER = "memberOrder";
    // questions
    BASED_ON_STATEMENT_KGBB = "basedOnStatementKGBB";
    ANSWER_MODE = "answerMode";
    SUBJECT_BINDING = "subjectBinding";
    POSITION_BINDINGS = "positionBindings";
    QUESTION_TREE = "questionTree";
    // data graph
    REQUIRED_OBJECT_POSITION = "requiredObjectPosition";
    OPTIONAL_OBJECT_POSITION = "optionalObjectPosition";
    INPUT_TYPE_LABEL = "inputTypeLabel";
    RESOURCE_URI = "resourceURI";
    LITERAL = "literal";
    LOGICAL_PROPERTY = "logicalProperty";
    CURRENT_VERSION = "currentVersion";
    // versions and resources
    VERSION_OF = "versionOf";
    PREVIOUS_VERSION = "previousVersion";
    CONTENT_ID = "contentId";
    RESOURCE_KIND = "resourceKind";
    CLASS_AFFILIATION = "classAffiliation";
    // dedicated graphs
    VERSIONS_GRAPH = "graph/versions";
    RESOURCES_GRAPH = "graph/resources";
    // unit classes
    ASSERTIONAL_STATEMENT_UNIT = "AssertionalStatementUnit";
    CONTINGENT_STATEMENT_UNIT = "ContingentStatementUnit";
    PROTOTYPICAL_STATEMENT_UNIT = "PrototypicalStatementUnit";
    UNIVERSAL_STATEMENT_UNIT = "UniversalStatementUnit";
    LEXICAL_STATEMENT_UNIT = "LexicalStatementUnit";
    NEGATION_UNIT = "NegationUnit";
    STATEMENT_QUESTION_UNIT = "StatementQuestionUnit";
    COMPOUND_QUESTION_UNIT = "CompoundQuestionUnit";
    // logical properties
    TRANSITIVE = "transitive";
    SYMMETRIC = "symmetric";
    ASYMMETRIC = "asymmetric";
    // built-in identification KGBBs
    TYPE_IDENTIFICATION_KGBB = "TypeIdentificationKGBB";
    SOME_INSTANCE_IDENTIFICATION_KGBB = "SomeInstanceIdentificationKGBB";
    EVERY_INSTANCE_IDENTIFICATION_KGBB = "EveryInstanceIdentificationKGBB";
    TYPE_IDENTIFICATION = "type-identification";
    SOME_INSTANCE_IDENTIFICATION = "some-instance-identification";
    EVERY_INSTANCE_IDENTIFICATION = "every-instance-identification";
    TYPE_IDENTIFICATION_UNIT = "TypeIdentificationUnit";
    SOME_INSTANCE_IDENTIFICATION_UNIT = "SomeInstanceIdentificationUnit";
    EVERY_INSTANCE_IDENTIFICATION_UNIT = "EveryInstanceIdentificationUnit";
    IDENTIFIED_CLASS = "identifiedClass";
    IDENTIFIED_LABEL = "identifiedLabel";
    REQUIRED_OBJECT_POSITION_CLASS = "requiredObjectPositionProperty";
    OPTIONAL_OBJECT_POSITION_CLASS = "optionalObjectPositionProperty";
    // relations named by resource kind
    SOME_INSTANCE_OF = "someInstanceOf";
    EVERY_INSTANCE_OF = "everyInstanceOf";
}

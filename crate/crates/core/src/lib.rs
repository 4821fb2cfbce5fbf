pub mod dimension;
pub mod numeric;
pub mod quantity;
pub mod unitdb;
pub mod lang;
pub mod checker;
pub mod corpus;

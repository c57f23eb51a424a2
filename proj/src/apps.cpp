namespace qit {}

export class SchemaMismatch extends Error {
  readonly column: string;

  constructor(column: string, source: string) {
    super(`schema mismatch: missing column '${column}' in ${source}`);
    this.name = "SchemaMismatch";
    this.column = column;
  }
}
